# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import sys
from .cli import main

sys.exit(main())
