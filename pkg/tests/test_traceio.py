import math

import pytest

from chansim.errors import TraceError
from chansim.geometry import ElevationAngle
from chansim.mpc import Mpc, Snapshot
from chansim.traceio import load_trace, save_trace


def sample_snapshots():
    mk = lambda **kw: Mpc(**kw)
    snap_a = Snapshot(
        psi=ElevationAngle(7.180755781458282),  # arcsin(50/400)
        distance_km=400.0,
        mpcs=(
            mk(amplitude=3.1e-9, phase_rad=0.25, delay_s=1.334226e-3,
               aod_az_deg=180.0, aod_el_deg=-7.18, aoa_az_deg=0.0,
               aoa_el_deg=7.18, is_los=True),
            mk(amplitude=1.2e-9, phase_rad=4.0, delay_s=1.3342265e-3,
               aod_az_deg=180.01, aod_el_deg=-7.18, aoa_az_deg=213.0,
               aoa_el_deg=-6.5),
        ),
        altitude_hint_km=50.0,
    )
    snap_b = Snapshot(
        psi=ElevationAngle(19.876874070078834),  # arcsin(136/400)
        distance_km=400.0,
        mpcs=(
            mk(amplitude=3.1e-9, phase_rad=1.5, delay_s=1.334226e-3,
               aod_az_deg=180.0, aod_el_deg=-19.88, aoa_az_deg=0.0,
               aoa_el_deg=19.88, is_los=True),
        ),
        altitude_hint_km=136.0,
    )
    return [snap_a, snap_b]


HEADER = "# chansim-trace v1 arc_radius_km=400.0 amplitude=linear"
COLS = (
    "altitude_km,amplitude,phase_rad,delay_s,aod_az_deg,aod_el_deg,"
    "aoa_az_deg,aoa_el_deg,n_interactions"
)


class TestRoundTrip:
    def test_save_load_exact(self, tmp_path):
        path = tmp_path / "trace.csv"
        snapshots = sample_snapshots()
        save_trace(snapshots, path)
        loaded = load_trace(path)
        assert loaded == snapshots

    def test_double_round_trip_bytes(self, tmp_path):
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        save_trace(sample_snapshots(), p1)
        save_trace(load_trace(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestLoadValidation:
    def test_missing_file(self, tmp_path):
        with pytest.raises(TraceError, match="not found"):
            load_trace(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(TraceError):
            load_trace(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(HEADER + "\n")
        with pytest.raises(TraceError, match="no rows"):
            load_trace(path)

    def test_bad_version(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("# chansim-trace v9 arc_radius_km=400\n" + COLS + "\n")
        with pytest.raises(TraceError, match="version"):
            load_trace(path)

    def test_missing_arc_radius(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("# chansim-trace v1 amplitude=linear\n" + COLS + "\n")
        with pytest.raises(TraceError, match="arc_radius_km"):
            load_trace(path)

    def test_wrong_field_count_reports_line(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(
            HEADER + "\n" + COLS + "\n" + "50.0,1e-9,0.0,0.001\n"
        )
        with pytest.raises(TraceError, match="line 3"):
            load_trace(path)

    def test_duplicate_los_reports_line(self, tmp_path):
        path = tmp_path / "t.csv"
        rows = [
            "50.0,1e-9,0.0,0.001,180.0,-7.0,0.0,7.0,0",
            "50.0,2e-9,0.0,0.002,180.0,-7.0,10.0,5.0,0",
        ]
        path.write_text(HEADER + "\n" + COLS + "\n" + "\n".join(rows) + "\n")
        with pytest.raises(TraceError, match="line 4.*duplicate LOS"):
            load_trace(path)

    def test_altitude_above_arc_radius(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(
            HEADER + "\n" + COLS + "\n" + "401.0,1e-9,0.0,0.001,180.0,-7.0,0.0,7.0,0\n"
        )
        with pytest.raises(TraceError):
            load_trace(path)


class TestDbmConversion:
    def test_power_rows_convert_to_linear_gain(self, tmp_path):
        path = tmp_path / "t.csv"
        header = "# chansim-trace v1 arc_radius_km=400.0 amplitude=dbm p_tx_dbm=30.0"
        # received -134.49 dBm at 30 dBm TX -> gain 10^(-164.49/20)
        path.write_text(
            header + "\n" + COLS + "\n"
            + "50.0,-134.49,0.0,0.001,180.0,-7.0,0.0,7.0,0\n"
        )
        snap = load_trace(path)[0]
        assert snap.mpcs[0].amplitude == pytest.approx(
            10.0 ** (-164.49 / 20.0), rel=1e-12
        )

    def test_dbm_header_requires_ptx(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text(
            "# chansim-trace v1 arc_radius_km=400.0 amplitude=dbm\n" + COLS + "\n"
            + "50.0,-134.49,0.0,0.001,180.0,-7.0,0.0,7.0,0\n"
        )
        with pytest.raises(TraceError, match="p_tx_dbm"):
            load_trace(path)


class TestSave:
    def test_mixed_radius_rejected(self, tmp_path):
        snaps = sample_snapshots()
        other = Snapshot(
            psi=ElevationAngle(30.0),
            distance_km=500.0,
            mpcs=(Mpc(1e-9, 0.0, 1.67e-3, is_los=True),),
        )
        with pytest.raises(ValueError):
            save_trace(snaps + [other], tmp_path / "t.csv")

    def test_empty_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            save_trace([], tmp_path / "t.csv")
