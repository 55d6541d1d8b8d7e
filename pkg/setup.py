#!/usr/bin/env python3
"""
Setup script for celldiff
Installs the package, its bundled presets and the celldiff command
"""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).resolve().parent


def read_requirements(name='requirements-minimal.txt'):
    """Runtime requirements, comments and blank lines dropped"""
    lines = (HERE / name).read_text(encoding='utf-8').splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith('#')]


setup(
    name='celldiff',
    version='1.0.0',
    description='Structured-population model of stem-cell differentiation with cytokine feedback',
    long_description=(HERE / 'README.md').read_text(encoding='utf-8'),
    long_description_content_type='text/markdown',
    packages=find_packages(include=['celldiff', 'celldiff.*']),
    package_data={'celldiff': ['data/presets/*.json']},
    python_requires='>=3.10',
    install_requires=read_requirements(),
    entry_points={'console_scripts': ['celldiff=celldiff.cli:main']},
)
