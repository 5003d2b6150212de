# laguerre/exceptions.py


class MVOPError(Exception):
    """Kelas dasar untuk setiap kegagalan numerik dari app laguerre."""

    def as_dict(self):
        return {'error': type(self).__name__, 'detail': str(self)}


class InvalidInput(MVOPError, ValueError):
    pass


class SingularMatrix(MVOPError):
    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond

    def as_dict(self):
        data = super().as_dict()
        data['cond'] = self.cond
        return data


class SingularMoment(MVOPError):
    """Sistem blok-Hankel singular: famili MVOP tidak ada pada s ini."""

    def __init__(self, message, n=None, cond=None):
        super().__init__(message)
        self.n = n
        self.cond = cond

    def as_dict(self):
        data = super().as_dict()
        data.update({'n': self.n, 'cond': self.cond})
        return data


class DivergentMoment(MVOPError):
    pass


class StepFailure(MVOPError):
    def __init__(self, message, last_s=None):
        super().__init__(message)
        self.last_s = last_s

    def as_dict(self):
        data = super().as_dict()
        data['last_s'] = self.last_s
        return data


class IterationDiverged(MVOPError):
    def __init__(self, message, n=None, deviation=None):
        super().__init__(message)
        self.n = n
        self.deviation = deviation

    def as_dict(self):
        data = super().as_dict()
        data.update({'n': self.n, 'deviation': self.deviation})
        return data


class DegenerateParameters(MVOPError):
    pass
