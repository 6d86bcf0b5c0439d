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

# Lint and test runner: isort, flake8 and black over the package and tests, then pytest.

import argparse
import subprocess as sp
import sys
from pathlib import Path

args = argparse.ArgumentParser()
args.add_argument("-si", "--skip-install", action="store_true", help="Skip installing dependencies")
args.add_argument("-st", "--skip-tests", action="store_true", help="Only run the linters")
args.add_argument("--slow", action="store_true", help="Also run the experiment-scale tests")
parser = args.parse_args()

current_path = Path(__file__).absolute().parent.parent
targets = ["stylomorph", "tests"]
print(f"[*] Running at {current_path}")

if not parser.skip_install:
    requirements_path = current_path / "requirements-dev.txt"
    print(f"[*] Installing requirements from {requirements_path}")
    sp.run(
        [sys.executable, "-m", "pip", "install", "-r", str(requirements_path), "-e", str(current_path)],
        stdout=sp.DEVNULL,
        stderr=sp.DEVNULL,
        cwd=current_path,
    )

steps = [
    ("isort", ["isort", "-c", *targets]),
    ("flake8", ["flake8", "--statistics", "--show-source", "--benchmark", "--tee", *targets]),
    ("black", ["black", "--check", *targets]),
]
if not parser.skip_tests:
    # the slow marker is deselected by the pytest addopts unless asked for
    marker = "slow or not slow" if parser.slow else "not slow"
    steps.append(("pytest", [sys.executable, "-m", "pytest", "--cov=stylomorph", "-m", marker]))

any_error = False
for name, command in steps:
    print(f"[*] Running {name}...")
    code = sp.Popen(command, cwd=current_path).wait()
    if code != 0:
        print(f"[-] {name} returned an non-zero code")
        any_error = True
    else:
        print(f"[+] {name} passed")

if any_error:
    print("[-] Checks finished, but some failed")
    exit(1)
print("[+] All checks passed")
exit(0)
