__all__ = ['config', 'files', 'log']

def __dir__():
    return sorted(__all__)
