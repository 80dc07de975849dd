# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

from ._utils import logger, set_verbosity, setup_plot

from .collection import *

from .matrix import matshow, hermitian, is_hermitian, is_unitary, equal_up_to_phase

from .pauli import *

from .channels import *

from .models import (
    Parameters,
    AbstractReadoutModel,
    NoReadoutError,
    ConfusionReadout,
    TensorFlip,
    CorrelatedFlip,
    AsymmetricCorrelatedFlip,
    CoherentRotation,
    ChannelReadout,
    readout_model,
)

from .sampling import *

from .estimator import *

from .simulator import *

from .mitigation import *

try:
    from ._version import version as __version__
except ImportError:  # pragma: no cover
    __version__ = "0.1.0"
