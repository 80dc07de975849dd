# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import setuptools


if __name__ == "__main__":
    # See `setup.cfg` and `pyproject.toml` for configuration.
    setuptools.setup()
