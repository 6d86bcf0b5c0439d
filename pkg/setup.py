import re
from pathlib import Path
from typing import List

from setuptools import find_packages, setup

ROOT = Path(__file__).parent


def read_requirements(name: str) -> List[str]:
    lines = (ROOT / name).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip() and not line.lstrip().startswith("#")]


def read_metadata(key: str) -> str:
    source = (ROOT / "stylomorph" / "_metadata.py").read_text(encoding="utf-8")
    match = re.search(rf"^{key}\s*=\s*[\"']([^\"']+)[\"']", source, re.MULTILINE)
    if match is None:
        raise RuntimeError(f"{key} not found in stylomorph/_metadata.py")
    return match.group(1)


setup(
    name="stylomorph",
    version=read_metadata("__version__"),
    description="Semantics-preserving source transformations against code authorship attribution.",
    long_description=(ROOT / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    author=read_metadata("__author__"),
    author_email=read_metadata("__author_email__"),
    license=read_metadata("__license__"),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Operating System :: OS Independent",
        "Topic :: Security",
        "Topic :: Software Development :: Compilers",
    ],
    keywords="stylometry authorship attribution adversarial program transformation mcts",
    packages=find_packages(include=["stylomorph", "stylomorph.*"]),
    install_requires=read_requirements("requirements.txt"),
    extras_require={"dev": read_requirements("requirements-dev.txt")},
    entry_points={"console_scripts": ["stylomorph=stylomorph.cmd:main"]},
    python_requires=">=3.9",
)
