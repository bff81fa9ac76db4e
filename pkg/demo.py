#!/usr/bin/env python
"""
Demo script to showcase QCE Diversity
Runs a small QPSK sweep over L and prints bounds, fitted slopes and floors
"""
from pathlib import Path

from qce_diversity.analysis.experiment import ExperimentRunner, ExperimentSpec
from qce_diversity.core.model import INFINITE, SystemConfig
from qce_diversity.theory.analytics import c0_margin, predicted_diversity, ser_floor_LltM
from qce_diversity.utils.logging import configure_logging


def main():
    configure_logging()
    print("=" * 70)
    print("📡 QCE Diversity - Demo")
    print("=" * 70)
    print()

    output_dir = Path('demo_output')
    base = SystemConfig(
        n_antennas=2,
        psk_order=4,
        quant_levels=5,
        snr_grid_db=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0),
        trials=200_000,
        seed=2024,
        workers=2,
    )
    variants = [base.with_levels(levels) for levels in (3, 4, 5, INFINITE)]

    print("🔍 Variants:")
    for config in variants:
        line = f"   {config.label}: predicted diversity {predicted_diversity(config)}"
        if config.is_ce_limit or config.quant_levels > config.psk_order:
            line += f", c0 = {c0_margin(config.psk_order, config.quant_levels):.4f}"
        elif config.quant_levels < config.psk_order:
            line += f", SER floor >= {ser_floor_LltM(config):.4g}"
        print(line)
    print()

    print("🎲 Simulating...")
    spec = ExperimentSpec(variants=variants, output_dir=output_dir, alpha_samples=20_000,
                          fit_window_db=(10.0, 25.0))
    runner = ExperimentRunner(spec)
    written = runner.run()
    print(f"✓ Wrote {len(written)} files")
    print()

    print("📈 Results:")
    for variant in runner.results['variants']:
        diversity = variant['diversity']
        floor = variant['floor']
        slope = f"{diversity['slope']:.2f}" if diversity else "n/a"
        floor_text = "floor" if floor and floor['detected'] else "no floor"
        print(f"   {variant['label']:<12} predicted {variant['predicted']:<3} fitted {slope:<6} {floor_text}")
    print()

    print("=" * 70)
    print("✨ Demo Complete!")
    print("=" * 70)
    print()
    print(f"📁 All outputs saved to: {output_dir.absolute()}")
    print()
    print("Next steps:")
    print(f"  1. Open {output_dir / 'summary.md'} for the summary table")
    print("  2. Plot the CSV columns with your tool of choice")
    print("  3. Run 'qce-diversity --help' for the full CLI")
    print()


if __name__ == '__main__':
    main()
