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

import time
from functools import wraps

from .. import config, term
from ..constants import ExitCode

__all__ = (
    "check_config_first",
    "time_program",
)

console = term.get_console()


def time_program(func):
    """Report the wall time of a command, and the exit code it ends with."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        started = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - started
        if isinstance(result, int) and result > 0:
            try:
                reason = ExitCode(result).name.replace("_", " ")
            except ValueError:
                reason = "exit code"
            console.error(f"Stopped after {elapsed:.2f}s ({reason}, {int(result)})")
        else:
            console.info(f"Finished in {elapsed:.2f}s")
        return result

    return wrapper


def check_config_first(func):
    """Load and validate the stored config before a long running command starts."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        handler = config.get_config_handler()
        handler.validate(handler.config)
        if handler.is_first_time():
            console.warning(f"No settings saved yet, using the defaults in {handler.config_file}")
            console.warning("Review them with `stylomorph config`")
        return func(*args, **kwargs)

    return wrapper
