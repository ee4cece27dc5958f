"""
Registry of the simulated schemes.

Scheme ids follow dm-<order>-<constellation>-const-<mapping>-map for the
dual-mode schemes, plus the OFDM-IM and plain OFDM baselines.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Tuple

from .constellation import (
    average_energy,
    build_conventional_pair,
    build_proposed_pair,
    energy_per_bit,
    qam16_base,
)
from .index_codebook import paper_codebook
from .modem import (
    BitMapping,
    DualModeModem,
    GroupModem,
    ModemError,
    SchemeConfig,
    ofdm_im_config,
    ofdm_modem,
)

logger = logging.getLogger(__name__)

GROUP_N = 4
GROUP_K = 2


def dm_config(order: int, constellation: str, mapping: BitMapping) -> SchemeConfig:
    """
    DM-OFDM-IM scheme over the n=4, k=2 codebook.

    Args:
        order: 4 (QPSK) or 16 (16QAM)
        constellation: "conv" or "prop"
        mapping: Bit mapping mode
    """
    builders = {"conv": build_conventional_pair, "prop": build_proposed_pair}
    if constellation not in builders:
        raise ModemError(f"Unknown constellation pair '{constellation}'")
    return SchemeConfig(
        n=GROUP_N,
        k=GROUP_K,
        pair=builders[constellation](order),
        codebook=paper_codebook(),
        bitmap_mode=mapping,
    )


@dataclass(frozen=True)
class SchemeSpec:
    """One registered scheme: how to build it and its energy per bit."""
    scheme_id: str
    description: str
    factory: Callable[[], GroupModem]
    eb: float

    def modem(self) -> GroupModem:
        return _modem_for(self.scheme_id)


def _dm_spec(order: int, constellation: str, mapping: BitMapping) -> SchemeSpec:
    tag = "qpsk" if order == 4 else "16qam"
    scheme_id = f"dm-{tag}-{constellation}-const-{mapping.value[:4]}-map"
    cfg = dm_config(order, constellation, mapping)
    return SchemeSpec(
        scheme_id=scheme_id,
        description=f"DM-OFDM-IM {tag.upper()}, {constellation} pair, {mapping.value} mapping",
        factory=lambda: DualModeModem(dm_config(order, constellation, mapping)),
        eb=energy_per_bit(cfg.pair, cfg.n, cfg.k, cfg.p),
    )


def _build_registry() -> Dict[str, SchemeSpec]:
    specs = [
        _dm_spec(4, "conv", BitMapping.CONVENTIONAL),
        _dm_spec(4, "prop", BitMapping.CONVENTIONAL),
        _dm_spec(4, "prop", BitMapping.PROPOSED),
        _dm_spec(16, "conv", BitMapping.CONVENTIONAL),
        _dm_spec(16, "prop", BitMapping.CONVENTIONAL),
        _dm_spec(16, "prop", BitMapping.PROPOSED),
    ]

    im_cfg = ofdm_im_config()
    specs.append(SchemeSpec(
        scheme_id="ofdm-im-16qam",
        description="OFDM-IM, 2 of 4 subcarriers active with 16QAM",
        factory=lambda: DualModeModem(ofdm_im_config()),
        eb=energy_per_bit(im_cfg.pair, im_cfg.n, im_cfg.k, im_cfg.p),
    ))
    specs.append(SchemeSpec(
        scheme_id="ofdm-16qam",
        description="Plain OFDM, 16QAM on every subcarrier",
        factory=lambda: ofdm_modem(GROUP_N),
        eb=average_energy(qam16_base()) / qam16_base().bits_per_symbol,
    ))
    return {spec.scheme_id: spec for spec in specs}


SCHEMES: Dict[str, SchemeSpec] = _build_registry()
SCHEME_IDS: Tuple[str, ...] = tuple(SCHEMES)


def get_scheme(scheme_id: str) -> SchemeSpec:
    try:
        return SCHEMES[scheme_id]
    except KeyError:
        raise ModemError(
            f"Unknown scheme '{scheme_id}', expected one of {', '.join(SCHEME_IDS)}"
        ) from None


@lru_cache(maxsize=None)
def _modem_for(scheme_id: str) -> GroupModem:
    # One modem per process; the batch engines carry cached lookup tables
    return SCHEMES[scheme_id].factory()


def spectral_efficiency(scheme_id: str) -> float:
    """p / n in bits/s/Hz."""
    modem = get_scheme(scheme_id).modem()
    return modem.bits_per_group / modem.n
