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

# Show or change the configuration every run starts from.

from dataclasses import replace
from typing import Tuple

import click
from rich.table import Table

from .. import config, term
from .base import StylomorphCommandHandler

__all__ = ("cli_config",)
console = term.get_console()


def _apply_setting(current: config.Config, setting: str) -> config.Config:
    key, sep, raw = setting.partition("=")
    section_name, dot, field_name = key.strip().partition(".")
    if not sep or not dot:
        raise click.BadParameter(f"{setting!r} is not `section.key=value`", param_hint="--set")
    section = getattr(current, section_name, None)
    if section is None or not hasattr(section, field_name):
        raise click.BadParameter(f"{key!r} is not a configuration key", param_hint="--set")
    try:
        value = int(raw)
    except ValueError:
        raise click.BadParameter(f"{raw!r} is not an integer", param_hint="--set")
    return replace(current, **{section_name: replace(section, **{field_name: value})})


@click.command(
    "config",
    help="Show the configuration, or change it with --set section.key=value",
    cls=StylomorphCommandHandler,
)
@click.option(
    "--set",
    "settings",
    multiple=True,
    help="A `section.key=value` pair to store, can be repeated",
)
def cli_config(settings: Tuple[str, ...]):
    handler = config.get_config_handler()
    current = handler.config
    if settings:
        for setting in settings:
            current = _apply_setting(current, setting)
        current = handler.validate(current)
        handler.save_config(current)
        console.info(f"[+] Saved {len(settings)} setting(s) to {handler.config_file}")
    elif handler.is_first_time():
        handler.save_config(current)

    table = Table(title=str(handler.config_file))
    table.add_column("Key")
    table.add_column("Value", justify="right")
    for section_name, section in current.to_dict().items():
        for field_name, value in section.items():
            table.add_row(f"{section_name}.{field_name}", str(value))
    console.table(table)
