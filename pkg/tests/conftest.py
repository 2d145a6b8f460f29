import pytest

from vlcnoma import ChannelGains, OpticalFrontEnd, ScenarioGeometry, SpectralEfficiencies

# Reference scenario: room and link geometry of the bundled default config.
REFERENCE_GAINS = ChannelGains(h11=2.5892e-6, h21=7.8573e-7, h22=6.8573e-7, h32=3.5892e-6)


@pytest.fixture(scope="session")
def reference_gains():
    return REFERENCE_GAINS


@pytest.fixture(scope="session")
def reference_geometry():
    return ScenarioGeometry(
        room_height_m=4.0,
        cell_radius_m=3.6,
        rx_heights_m=(0.5, 0.5, 1.0),
        r11_m=0.4885,
        r21_m=3.2880,
        r22_m=3.4670,
        r32_m=0.3030,
    )


@pytest.fixture(scope="session")
def reference_front_end():
    return OpticalFrontEnd(
        semi_angle_deg=60.0,
        detector_area_m2=1e-4,
        responsivity_a_per_w=0.4,
        filter_gain=1.0,
        fov_deg=60.0,
        concentrator_index=1.5,
    )


@pytest.fixture(scope="session")
def reference_bpcu():
    return SpectralEfficiencies(3, 2, 2)
