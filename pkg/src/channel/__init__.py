from src.channel.models import (
    CavityKind,
    ChannelModel,
    FieldIntensities,
    StaticKind,
    cavity_transfer,
    new_cavity_channel,
    new_static_channel,
    static_channel_from_transmittance,
)
from src.channel.psd import ErrorModel, error_psd, error_psd_oracle, psi, unequalized_psd

__all__ = [
    "CavityKind",
    "ChannelModel",
    "ErrorModel",
    "FieldIntensities",
    "StaticKind",
    "cavity_transfer",
    "error_psd",
    "error_psd_oracle",
    "new_cavity_channel",
    "new_static_channel",
    "psi",
    "static_channel_from_transmittance",
    "unequalized_psd",
]
