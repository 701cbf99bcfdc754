"""
@author jacobi petrucciani
@desc custom exceptions and error handling
"""
import logging


logger = logging.getLogger(__name__)


class WarpisoException(Exception):
    """
    @desc base warpiso exception class
    """

    def __init__(self, *args, **kwargs) -> None:  # type: ignore
        """
        @cc 2
        @desc exception constructor; keyword arguments become attributes
        """
        self.__dict__.update(kwargs)
        extra = ""
        if args:
            extra = '\n| extra info: "{extra}"'.format(extra=args[0])
        doc = (self.__doc__ or "").strip().replace("@desc ", "")
        self.message = "[{exception}]: {doc}{extra}".format(
            exception=self.__class__.__name__, doc=doc, extra=extra
        )
        logger.debug(self.message)
        Exception.__init__(self, *args)

    def __str__(self) -> str:
        """
        @cc 1
        @desc dunder str method
        @ret the docstring headline plus any extra info
        """
        return self.message


class DomainError(WarpisoException):
    """
    @desc a radius, volume or parameter lies outside the admissible range
    """


class NumericError(WarpisoException):
    """
    @desc a numerical procedure failed to converge or produced a non-finite value
    """


class UnsupportedFiber(WarpisoException):
    """
    @desc the fiber cannot be discretized (abstract or higher-dimensional fiber)
    """


class UnsupportedConfiguration(WarpisoException):
    """
    @desc the requested computation is not available for this space or graph
    """


class GraphConstructionError(WarpisoException):
    """
    @desc the radial graph is nonpositive or leaves the domain of the warping profile
    """


class PreconditionError(WarpisoException):
    """
    @desc an operation precondition does not hold
    """


class InvalidWeight(WarpisoException):
    """
    @desc the weight function is not admissible
    """


class ConfigError(WarpisoException):
    """
    @desc the experiment config is invalid
    """
