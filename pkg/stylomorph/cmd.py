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

# Entry point of the `stylomorph` command.
#
# Exit codes are shared by every subcommand: 0 on success (a failed attack is
# still a successful run), 2 for usage errors, 3 for unreadable or invalid
# input data, 4 when an experiment cannot be carried out.

from __future__ import annotations

import click

from . import _metadata
from .cli.attack import attack_corpus_file
from .cli.attribute import attribute_file
from .cli.config import cli_config
from .cli.corpus import corpus_generate
from .cli.evaluate import evaluate_corpus
from .cli.train import train_model
from .cli.transform import transform_file
from .cli.transformers import transformers_group
from .cli.verify import verify_corpus
from .term import get_console

console = get_console()
COMMANDS = (
    corpus_generate,
    verify_corpus,
    train_model,
    attribute_file,
    transformers_group,
    transform_file,
    attack_corpus_file,
    evaluate_corpus,
    cli_config,
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(
    _metadata.__version__, "--version", "-V", prog_name=_metadata.__name__, message="%(prog)s v%(version)s"
)
@click.option(
    "-v",
    "--verbose",
    is_flag=True,
    default=False,
    help="Print debug traces of the interpreter, the search and the models to stderr",
)
def main(verbose: bool):
    """
    Semantics-preserving source transformations against code authorship attribution.

    Generate a MiniC corpus, train attribution models on it, then rewrite
    programs until the models attribute them to someone else.
    """
    if verbose:
        console.enable_debug()
    else:
        console.disable_debug()


for command in COMMANDS:
    main.add_command(command)


if __name__ == "__main__":
    main()
