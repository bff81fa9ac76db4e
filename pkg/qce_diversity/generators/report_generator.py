"""
CSV tables and experiment summaries
"""
import json
import logging
from pathlib import Path
from typing import Dict, List

import pandas as pd
from jinja2 import Template

from qce_diversity.core.model import SystemConfig
from qce_diversity.exceptions import InvalidArgumentError
from qce_diversity.simulation.engine import CSV_COLUMNS, SerCurve

logger = logging.getLogger(__name__)

SUMMARY_TEMPLATE = """\
# QCE diversity experiment

Seed {{ seed }}, {{ trials }} trials per point, P_T = {{ total_power }}, SNR grid {{ snr_db|join(', ') }} dB.
{% if fit_window_db %}Fit window: {{ fit_window_db[0] }} to {{ fit_window_db[1] }} dB.{% else %}Fit window: whole grid.{% endif %}

| Variant | Regime | Predicted d | Fitted slope | Fit points | Floor | Floor estimate | CSV |
|---|---|---|---|---|---|---|---|
{% for v in variants -%}
| {{ v.label }} | {{ v.regime }} | {{ v.predicted }} | {{ v.slope }} | {{ v.n_points }} | {{ v.floor }} | {{ v.floor_estimate }} | {{ v.csv }} |
{% endfor %}
{% for v in variants if v.fit_error %}
- {{ v.label }}: {{ v.fit_error }}
{% endfor %}
"""


def emit_csv(curve: SerCurve, path) -> Path:
    """
    Write one SER curve as CSV.

    Columns follow CSV_COLUMNS; bounds that do not apply are empty fields and
    floats are written in shortest round-trip form.
    """
    if not curve.points:
        raise InvalidArgumentError("cannot write an empty curve")
    path = Path(path)
    curve.to_frame().to_csv(path, index=False, na_rep='', lineterminator='\n')
    logger.debug("Wrote %d rows to %s", len(curve.points), path)
    return path


def read_csv(path, config: SystemConfig) -> SerCurve:
    """Parse a file written by emit_csv back into a SerCurve for ``config``"""
    frame = pd.read_csv(path, float_precision='round_trip')
    if list(frame.columns) != CSV_COLUMNS:
        raise InvalidArgumentError(f"{path}: unexpected header {','.join(map(str, frame.columns))}")
    return SerCurve.from_frame(config, frame)


class ReportGenerator:
    """Writes experiment summaries as JSON and Markdown"""

    def write_summary(self, results: Dict, output_dir) -> List[Path]:
        """
        Write summary.json and summary.md.

        Args:
            results: Summary dictionary built by the experiment runner
            output_dir: Directory receiving both files

        Returns:
            Paths of the written files
        """
        output_dir = Path(output_dir)
        json_path = output_dir / 'summary.json'
        md_path = output_dir / 'summary.md'

        with open(json_path, 'w') as f:
            json.dump(results, f, indent=2, allow_nan=True)
        md_path.write_text(self.render_markdown(results), encoding='utf-8')
        return [json_path, md_path]

    def render_markdown(self, results: Dict) -> str:
        rows = []
        for variant in results.get('variants', []):
            diversity = variant.get('diversity') or {}
            floor = variant.get('floor') or {}
            rows.append({
                'label': variant['label'],
                'regime': variant['regime'],
                'predicted': variant['predicted'],
                'slope': f"{diversity['slope']:.3f}" if diversity else 'n/a',
                'n_points': diversity.get('n_points', 0),
                'floor': ('yes' if floor['detected'] else 'no') if floor else 'n/a',
                'floor_estimate': f"{floor['estimate']:.4g}" if floor else 'n/a',
                'csv': variant['csv'],
                'fit_error': variant.get('fit_error'),
            })
        return Template(SUMMARY_TEMPLATE).render(
            seed=results.get('seed'),
            trials=results.get('trials'),
            total_power=results.get('total_power'),
            snr_db=results.get('snr_db', []),
            fit_window_db=results.get('fit_window_db'),
            variants=rows,
        )
