from .commands import COMMANDS, CommandResult
from .config import RunConfig
from .main import build_parser, main

__all__ = ["COMMANDS", "CommandResult", "RunConfig", "build_parser", "main"]
