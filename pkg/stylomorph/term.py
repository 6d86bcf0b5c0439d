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

# Console output of the command line tool.
#
# Diagnostics (tagged lines, spinners, debug traces) go to stderr, while result
# tables go to stdout next to the program text and JSON that commands echo, so
# the output of `stylomorph transform` can be piped into a file or another run.

from typing import TYPE_CHECKING, Optional

from rich.console import Console as RichConsole
from rich.table import Table
from rich.theme import Theme as RichTheme

if TYPE_CHECKING:
    from rich.status import Status as RichStatus

__all__ = ("Console", "get_console")

rich_theme = RichTheme(
    {
        "warning": "yellow bold",
        "error": "red bold",
        "highlight": "magenta bold",
        "info": "cyan bold",
    }
)


class Console:
    def __init__(self, debug_mode: bool = False):
        self.__debug_mode = debug_mode
        self.console = RichConsole(highlight=False, theme=rich_theme, soft_wrap=True, stderr=True)
        self.results = RichConsole(highlight=False, theme=rich_theme)
        self._status: Optional["RichStatus"] = None
        self.__last_status: Optional[str] = None

    def enable_debug(self):
        self.__debug_mode = True

    def disable_debug(self):
        self.__debug_mode = False

    @property
    def debug_mode(self) -> bool:
        return self.__debug_mode

    def __tag(self, text: str, theme: str) -> str:
        # plain tags in debug mode keep captured logs greppable
        if self.__debug_mode:
            return f"[{text}]"
        return f"[[{theme}]{text}[/{theme}]]"

    def info(self, *args, **kwargs):
        self.console.print(self.__tag("INFO", "info"), *args, **kwargs)

    def warning(self, *args, **kwargs):
        self.console.print(self.__tag("WARN", "warning"), *args, **kwargs)

    def error(self, *args, **kwargs):
        self.console.print(self.__tag("ERROR", "error"), *args, **kwargs)

    def log(self, *args, **kwargs):
        if self.__debug_mode:
            self.console.log(self.__tag("LOG", "highlight"), *args, **kwargs)

    def status(self, message: str):
        """Show ``message`` as the progress line of a long loop.

        Outside debug mode this is a spinner, updated in place by later calls.
        In debug mode, where ``log`` lines interleave, each message is printed
        as a plain line instead.
        """
        self.__last_status = message
        if self.__debug_mode:
            self.console.print(message)
            return
        if not self.console.is_terminal:
            return
        if self._status is None:
            spinner = {"spinner": "dots"} if self.is_advanced() else {"spinner": "line", "refresh_per_second": 6}
            self._status = self.console.status(message, **spinner)
            self._status.start()
        else:
            self._status.update(message)

    def stop_status(self, final_text: Optional[str] = None) -> None:
        """End the progress line and report ``final_text`` as info.

        Without ``final_text`` the last progress message is reported, but only
        when it was visible to begin with.
        """
        shown = self._status is not None or self.__debug_mode
        if self._status is not None:
            self._status.stop()
            self._status = None
        if final_text is not None:
            self.info(final_text)
        elif shown and self.__last_status is not None:
            self.info(self.__last_status)
        self.__last_status = None

    def table(self, table: Table):
        self.results.print(table)

    def is_advanced(self):
        return not self.console.legacy_windows


ROOT_CONSOLE = Console()


def get_console() -> Console:
    return ROOT_CONSOLE
