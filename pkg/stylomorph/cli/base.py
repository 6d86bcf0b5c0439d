"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

import sys
import traceback

import click
from click.core import Context

from .. import term
from ..attribution import ModelFormatError
from ..config import ConfigError
from ..constants import ExitCode
from ..corpus import CorpusIoError, FormatError, RenderError, TooManyAuthors
from ..experiment import ExperimentFailure
from ..lang.errors import LangError
from ..transform import TransformError

console = term.get_console()
__all__ = (
    "StylomorphCommandHandler",
    "UnrecoverableError",
    "DATA_ERRORS",
    "EXPERIMENT_ERRORS",
)

# expected failures, reported with a short diagnostic instead of a traceback
DATA_ERRORS = (CorpusIoError, FormatError, ModelFormatError, TooManyAuthors, LangError, ConfigError, TransformError)
EXPERIMENT_ERRORS = (ExperimentFailure, RenderError)


class UnrecoverableError(click.ClickException):
    """An exception no command expects, shown with its traceback."""

    exit_code = 1

    def __init__(self, message, exc_info):
        super().__init__(message)
        self.exc_info = exc_info

    def show(self):
        console.error(f"Internal error: {self.message or type(self.exc_info[1]).__name__}")
        console.error("This is a bug in stylomorph, the traceback follows")
        traceback.print_exception(*self.exc_info)


class StylomorphCommandHandler(click.Command):
    """A command whose integer return value becomes the process exit code."""

    def invoke(self, ctx: Context):
        try:
            result = super().invoke(ctx)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except DATA_ERRORS as ex:
            console.error(str(ex))
            result = ExitCode.data_error
        except EXPERIMENT_ERRORS as ex:
            console.error(str(ex))
            result = ExitCode.experiment_failure
        except Exception as ex:
            # Invoke error handler
            raise UnrecoverableError(str(ex), sys.exc_info())
        if isinstance(result, int) and result > 0:
            ctx.exit(int(result))
        return result
