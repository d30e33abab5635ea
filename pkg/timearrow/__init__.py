"""Forward and backward estimation errors of rank-one stationary processes"""
from .utils.version import get_version

VERSION = (0, 1, 0, 'final', 0)

__version__ = get_version(VERSION, __file__)
