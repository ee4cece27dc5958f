"""Tests for the scheme registry."""

import pytest

from src.utils.modem import BitMapping, DualModeModem, ModemError, OfdmModem
from src.utils.schemes import SCHEME_IDS, SCHEMES, dm_config, get_scheme, spectral_efficiency


def test_registered_ids():
    assert SCHEME_IDS == (
        "dm-qpsk-conv-const-conv-map",
        "dm-qpsk-prop-const-conv-map",
        "dm-qpsk-prop-const-prop-map",
        "dm-16qam-conv-const-conv-map",
        "dm-16qam-prop-const-conv-map",
        "dm-16qam-prop-const-prop-map",
        "ofdm-im-16qam",
        "ofdm-16qam",
    )
    assert set(SCHEMES) == set(SCHEME_IDS)


@pytest.mark.parametrize("scheme_id,eb", [
    ("dm-qpsk-conv-const-conv-map", 1.8928),
    ("dm-qpsk-prop-const-prop-map", 1.0),
    ("dm-16qam-conv-const-conv-map", 4.4444),
    ("dm-16qam-prop-const-conv-map", 2.3333),
    ("ofdm-im-16qam", 2.0),
    ("ofdm-16qam", 2.5),
])
def test_energy_per_bit(scheme_id, eb):
    assert get_scheme(scheme_id).eb == pytest.approx(eb, abs=1e-3)


@pytest.mark.parametrize("scheme_id,se", [
    ("dm-qpsk-conv-const-conv-map", 2.5),
    ("dm-qpsk-prop-const-prop-map", 2.5),
    ("dm-16qam-prop-const-prop-map", 4.5),
    ("ofdm-im-16qam", 2.5),
    ("ofdm-16qam", 4.0),
])
def test_spectral_efficiency(scheme_id, se):
    assert spectral_efficiency(scheme_id) == se


def test_modems_are_cached_per_scheme():
    spec = get_scheme("dm-16qam-prop-const-prop-map")
    assert spec.modem() is spec.modem()
    assert isinstance(spec.modem(), DualModeModem)
    assert isinstance(get_scheme("ofdm-16qam").modem(), OfdmModem)


def test_unknown_scheme():
    with pytest.raises(ModemError, match="Unknown scheme 'dm-8psk'"):
        get_scheme("dm-8psk")


def test_unknown_constellation_pair():
    with pytest.raises(ModemError):
        dm_config(4, "offset", BitMapping.CONVENTIONAL)
