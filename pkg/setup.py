#!/usr/bin/env python
"""
@author jacobi petrucciani
@desc pip setup file
"""
from setuptools import setup, find_packages


__library__ = "warpiso"
__version__ = "0.1"

with open("README.md") as readme:
    LONG_DESCRIPTION = readme.read()

setup(
    name=__library__,
    version=__version__,
    description=("numerical isoperimetric checks in warped product manifolds"),
    long_description=LONG_DESCRIPTION,
    long_description_content_type="text/markdown",
    author="Jacobi Petrucciani",
    author_email="jacobi@mimirhq.com",
    url="https://github.com/jpetrucciani/{}.git".format(__library__),
    download_url="https://github.com/jpetrucciani/{}.git".format(__library__),
    license="MIT",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.8",
    install_requires=["numpy>=1.20", "scipy>=1.7", "PyYAML>=5.4", "matplotlib>=3.4"],
    entry_points={"console_scripts": ["warpiso=warpiso.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    zip_safe=False,
)
