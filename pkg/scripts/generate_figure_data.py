"""Write the CSV tables behind the rate-loss and bound-sandwich plots.

Usage: python scripts/generate_figure_data.py [OUT_DIR]
"""
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from twoway.models.sweeps import run_sweep, write_table
from twoway.schemas.report import SweepConfig

RECIPES = {
    # Key rates versus fibre length at 0.2 dB/km
    "rate_vs_km": dict(
        spec="lossy", start=0.0, stop=500.0, points=501, distance_mode=True,
        series=["capacity", "tgw", "no-switching", "twoway-hom", "bb84-1ph", "bb84-decoy", "dvmdi"],
    ),
    "thermal_loss_nbar1": dict(
        spec="thermal-loss:nbar=1", start=0.01, stop=0.99, points=99,
        series=["reverse-coherent-info-clamped", "flux", "tgw"],
    ),
    "amplifier_nbar1": dict(
        spec="amplifier:nbar=1", start=1.01, stop=5.0, points=200,
        series=["coherent-info-clamped", "flux"],
    ),
    "additive_noise": dict(
        spec="additive", start=0.01, stop=1.0, points=100,
        series=["coherent-info-clamped", "flux"],
    ),
    "depolarizing_qubit": dict(
        spec="depolarizing", start=0.0, stop=1.0, points=101,
        series=["lower", "upper"],
    ),
    "amplitude_damping": dict(
        spec="damping", start=0.0, stop=1.0, points=101,
        series=["reverse-coherent-info", "ree", "squashed", "half-assisted", "lower", "upper"],
    ),
}


def generate(out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    for name, recipe in RECIPES.items():
        path = os.path.join(out_dir, f"{name}.csv")
        cfg = SweepConfig(fmt="csv", out=path, **recipe)
        table = run_sweep(cfg)
        write_table(table, cfg.fmt, cfg.out)
        print(f"✅ {name}: {len(table)} rows -> {path}")


if __name__ == "__main__":
    generate(sys.argv[1] if len(sys.argv) > 1 else "figure_data")
