# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

from typing import Any, Dict, Optional, Union

from .abc import Parameters, AbstractReadoutModel
from .flip import NoReadoutError, TensorFlip, CorrelatedFlip, AsymmetricCorrelatedFlip
from .confusion import ConfusionReadout
from .coherent import CoherentRotation, ChannelReadout

READOUT_MODELS = {
    cls.name: cls
    for cls in (
        NoReadoutError,
        ConfusionReadout,
        TensorFlip,
        CorrelatedFlip,
        AsymmetricCorrelatedFlip,
        CoherentRotation,
    )
}


def readout_model(
    spec: Union[None, Dict[str, Any], AbstractReadoutModel]
) -> AbstractReadoutModel:
    """Builds a readout model from its config description.

    Parameters
    ----------
    spec : dict or AbstractReadoutModel or None
        A mapping ``{"type": name, **params}``. ``None`` means noiseless readout.

    Returns
    -------
    model : AbstractReadoutModel

    Examples
    --------
    >>> readout_model({"type": "tensor_flip", "p": [0.02, 0.05]})
    TensorFlip({'p': [0.02, 0.05]})
    """
    if spec is None:
        return NoReadoutError()
    if isinstance(spec, AbstractReadoutModel):
        return spec
    params = dict(spec)
    name = params.pop("type", None)
    if name not in READOUT_MODELS:
        raise ValueError(
            f"Unknown readout model '{name}', valid types: {sorted(READOUT_MODELS)}"
        )
    try:
        return READOUT_MODELS[name](**params)
    except TypeError as e:
        raise ValueError(f"Invalid parameters for readout model '{name}': {e}") from e
