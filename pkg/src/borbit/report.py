"""Console logging for the borbit command line"""
import sys
import logging
from colorama import init, Fore, Style

LOGGER = "borbit"


class LevelColorFormatter(logging.Formatter):
    """Colours the level name only, messages stay greppable"""
    Colors = {
        "DEBUG": Fore.BLUE,
        "INFO": Fore.GREEN,
        "WARNING": Fore.YELLOW,
        "ERROR": Fore.RED,
        "CRITICAL": Fore.MAGENTA,
    }

    def format(self, record):
        text = logging.Formatter.format(self, record)
        color = self.Colors.get(record.levelname)
        if color is None:
            return text
        return text.replace(record.levelname,
                            color + record.levelname + Style.RESET_ALL, 1)


def init_logging(level=logging.WARNING):
    """Attach the "stream" handler once, later calls only retarget it

    The handler follows the current `sys.stderr`, so redirected streams
    in one `main()` call do not swallow messages of the next.
    """
    handler = stream_handler()
    if handler is None:
        init()
        handler = logging.StreamHandler(sys.stderr)
        handler.set_name("stream")
        handler.setFormatter(LevelColorFormatter(
            fmt="%(levelname)s %(name)s: %(message)s"))

        logger = logging.getLogger(LOGGER)
        logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)
    else:
        handler.setStream(sys.stderr)

    handler.setLevel(level)
    return handler


def stream_handler():
    logger = logging.getLogger(LOGGER)
    return next((h for h in logger.handlers if h.name == "stream"), None)
