"""Rewrite the golden files. Only run this when an output change is intended."""

from pathlib import Path

from rsengine.automorphic import delta
from rsengine.characters import character
from rsengine.cli import main
from rsengine.rankin_selberg import RSPair, rs_stream, twisted_pair

HERE = Path(__file__).parent


def coeffs_golden() -> None:
    d = delta(100)
    stream = rs_stream(twisted_pair(RSPair(d, d), character(5, 2).primitive()), 100)
    with open(HERE / "coeffs_delta_delta_chi5_2_limit100.csv", "w") as fh:
        stream.to_csv(fh)


if __name__ == "__main__":
    coeffs_golden()
    main(["siegel-trend", "--out", str(HERE / "siegel_trend_300.csv")])
