"""
Experiment orchestration: simulate every configured variant, fit, and write outputs
"""
import logging
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from qce_diversity.analysis.diversity import (
    MIN_FIT_ERRORS,
    DiversityEstimate,
    FloorEstimate,
    fit_diversity,
    floor_detect,
)
from qce_diversity.config import (
    ConfigValues,
    build_system_configs,
    load_alpha_samples,
    parse_alpha_samples,
    parse_fit_window,
)
from qce_diversity.core.model import SystemConfig, format_levels
from qce_diversity.exceptions import ConfigError, InsufficientDataError
from qce_diversity.simulation.engine import SerCurve, attach_bounds, run_ser
from qce_diversity.theory.analytics import diversity_regime, predicted_diversity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    A sweep over quantization levels for one (N, M) pair.

    ``alpha_samples`` of None or 0 skips the analytic bound columns.
    """

    variants: Tuple[SystemConfig, ...]
    output_dir: Path
    alpha_samples: Optional[int] = 100_000
    fit_window_db: Optional[Tuple[float, float]] = None
    fit_min_errors: int = MIN_FIT_ERRORS

    def __post_init__(self):
        object.__setattr__(self, 'variants', tuple(self.variants))
        object.__setattr__(self, 'output_dir', Path(self.output_dir))
        if not self.variants:
            raise ConfigError("experiment has no variants", field='l')
        grid = self.variants[0].snr_grid_db
        if any(v.snr_grid_db != grid for v in self.variants):
            raise ConfigError("all variants must share the SNR grid", field='snr_db')
        object.__setattr__(self, 'alpha_samples', parse_alpha_samples(self.alpha_samples))

    @classmethod
    def from_values(cls, values: ConfigValues) -> 'ExperimentSpec':
        return cls(
            variants=tuple(build_system_configs(values)),
            output_dir=Path(values.get('out')),
            alpha_samples=load_alpha_samples(values),
            fit_window_db=parse_fit_window(values.get('fit_window')),
        )


@dataclass
class VariantResult:
    curve: SerCurve
    csv_path: Path
    diversity: Optional[DiversityEstimate] = None
    fit_error: Optional[str] = None
    floor: Optional[FloorEstimate] = None

    def to_dict(self) -> Dict:
        config = self.curve.config
        entry = {
            'label': config.label,
            'n': config.n_antennas,
            'm': config.psk_order,
            'l': format_levels(config.quant_levels),
            'regime': diversity_regime(config),
            'predicted': str(predicted_diversity(config)),
            'csv': self.csv_path.name,
            'diversity': None,
            'fit_error': self.fit_error,
            'floor': None,
        }
        if self.diversity is not None:
            d = self.diversity
            entry['diversity'] = {
                'slope': d.slope,
                'fit_window_db': list(d.fit_window_db),
                'residual_rms': d.residual_rms,
                'n_points': d.n_points,
            }
        if self.floor is not None:
            f = self.floor
            entry['floor'] = {
                'detected': f.detected,
                'estimate': f.floor,
                'ratio': f.ratio,
                'reference_snr_db': f.reference_snr_db,
                'highest_snr_db': f.highest_snr_db,
            }
        return entry


class ExperimentRunner:
    """Runs an ExperimentSpec and collects per-variant results"""

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.variants: List[VariantResult] = []
        self.results: Dict = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'snr_db': list(spec.variants[0].snr_grid_db),
            'variants': [],
        }

    def run(self) -> List[Path]:
        """
        Simulate every variant, write one CSV each plus summary.json and summary.md.

        Returns:
            Paths of all written files
        """
        from qce_diversity.generators.report_generator import ReportGenerator, emit_csv

        self.spec.output_dir.mkdir(parents=True, exist_ok=True)
        written: List[Path] = []
        for config in self.spec.variants:
            result = self._run_variant(config)
            emit_csv(result.curve, result.csv_path)
            written.append(result.csv_path)
            self.variants.append(result)
            self.results['variants'].append(result.to_dict())

        first = self.spec.variants[0]
        self.results.update({
            'seed': first.seed,
            'trials': first.trials,
            'total_power': first.total_power,
            'alpha_samples': self.spec.alpha_samples,
            'fit_window_db': list(self.spec.fit_window_db) if self.spec.fit_window_db else None,
        })
        written.extend(ReportGenerator().write_summary(self.results, self.spec.output_dir))
        return written

    def _run_variant(self, config: SystemConfig) -> VariantResult:
        if diversity_regime(config) == 'zero' and config.min_errors:
            # floor decisions need the full trial budget at every point
            logger.debug("%s: early stop disabled for floor detection", config.label)
            config = replace(config, min_errors=0)

        logger.info("Running %s", config.label)
        curve = run_ser(config)
        if self.spec.alpha_samples:
            curve = attach_bounds(curve, self.spec.alpha_samples)

        result = VariantResult(curve=curve, csv_path=self.spec.output_dir / f"{config.label}.csv")
        try:
            result.diversity = fit_diversity(curve, self.spec.fit_window_db, self.spec.fit_min_errors)
        except InsufficientDataError as e:
            logger.warning("%s: diversity fit skipped: %s", config.label, e)
            result.fit_error = str(e)
        try:
            result.floor = floor_detect(curve)
        except InsufficientDataError as e:
            logger.debug("%s: floor detection skipped: %s", config.label, e)
        return result


def run_experiment(spec: ExperimentSpec) -> List[Path]:
    return ExperimentRunner(spec).run()
