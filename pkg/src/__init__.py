"""
NL-MMSE Source Package
"""
from src.config import config

__version__ = "0.1.0"
__all__ = ["config"]
