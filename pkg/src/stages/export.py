"""
Export stage: writes design.json, plot-ready CSVs and a run summary.

The summary is written as markdown and rendered to a standalone HTML page.
Outputs contain no wall-clock content, so identical configs give identical
files.
"""

import logging
from pathlib import Path
from typing import Any

import markdown
import numpy as np
import pandas as pd

from src.channel.models import ChannelModel
from src.channel.psd import error_psd_from_values, unequalized_psd
from src.core.errors import CoheqError
from src.core.grid import log_grid
from src.core.schemas import DesignRecord
from src.core.storage import atomic_write_text, write_csv
from src.stages.base import Stage, StageResult
from src.verify import Equalizer

logger = logging.getLogger(__name__)

HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>{title}</title>
    <style>
        body {{
            font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, 'Helvetica Neue', Arial, sans-serif;
            max-width: 860px;
            margin: 0 auto;
            padding: 20px;
            line-height: 1.6;
            color: #333;
        }}
        h1 {{
            border-bottom: 2px solid #3498db;
            padding-bottom: 0.3em;
        }}
        code, pre {{
            background-color: #f4f4f4;
            font-family: 'Courier New', Courier, monospace;
        }}
        pre {{
            padding: 15px;
            border-radius: 5px;
            overflow-x: auto;
        }}
        table {{
            border-collapse: collapse;
            margin: 1em 0;
        }}
        th, td {{
            border: 1px solid #ddd;
            padding: 6px 12px;
            text-align: left;
        }}
        th {{
            background-color: #3498db;
            color: white;
        }}
    </style>
</head>
<body>
    {body}
</body>
</html>"""


def render_html(markdown_text: str, title: str) -> str:
    """Render a markdown summary to a standalone HTML page."""
    body = markdown.markdown(markdown_text, extensions=["fenced_code", "tables", "toc"])
    return HTML_TEMPLATE.format(title=title, body=body)


def plot_omegas(channel: ChannelModel, nodes: Any = None) -> np.ndarray:
    extra = list(channel.resonance_frequencies())
    if nodes is not None:
        extra.extend(float(omega) for omega in nodes[0])
    return log_grid(1e-3, 1e3, 200, extra=extra).omegas


def psd_frame(channel: ChannelModel, design: Equalizer, omegas: np.ndarray) -> pd.DataFrame:
    h11 = design.response(omegas)[:, 0, 0]
    return pd.DataFrame(
        {
            "omega": omegas,
            "P_e": error_psd_from_values(channel, h11, omegas),
            "P_y_minus_u": unequalized_psd(channel, omegas),
            "gamma_sq": np.full(omegas.size, np.nan if design.gamma_sq_bound is None else design.gamma_sq_bound),
        }
    )


def bode_frame(design: Equalizer, omegas: np.ndarray) -> pd.DataFrame:
    values = design.response(omegas)
    columns: dict[str, np.ndarray] = {"omega": omegas}
    for name, (i, j) in {"h11": (0, 0), "h12": (0, 1), "h21": (1, 0), "h22": (1, 1)}.items():
        columns[f"mag_{name}"] = np.abs(values[:, i, j])
        columns[f"phase_{name}"] = np.angle(values[:, i, j])
    return pd.DataFrame(columns)


def _fmt(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def summary_markdown(record: DesignRecord) -> str:
    lines = [f"# Equalizer design: {record.method}", ""]

    lines += ["## Channel", "", "| parameter | value |", "|---|---|"]
    lines += [f"| {key} | {_fmt(value)} |" for key, value in record.channel.items()]
    lines.append("")

    lines += ["## Design", "", "| quantity | value |", "|---|---|"]
    lines.append(f"| guaranteed bound gamma^2 | {_fmt(record.gamma_sq_bound)} |")
    lines.append(f"| optimal value | {_fmt(record.optimal_value)} |")
    lines.append(f"| grid optimum | {_fmt(record.gamma_tilde_sq)} |")
    lines.append(f"| Theta | {_fmt(record.theta)} |")
    if record.interpolation is not None:
        lines.append(f"| Pick nodes | {len(record.interpolation.omegas)} |")
        lines.append(f"| tau | {_fmt(record.interpolation.tau)} |")
    lines.append("")

    if record.verification is not None:
        report = record.verification
        verdict = "passed" if report["passed"] else "FAILED (" + ", ".join(report["failures"]) + ")"
        lines += ["## Verification", "", f"**Result:** {verdict}", "", "| check | value |", "|---|---|"]
        for key in (
            "paraunitarity_residual_max",
            "contraction_margin",
            "psd_bound_margin",
            "sup_error_psd",
            "h3_rank_constant",
            "node_residual_max",
            "oracle_residual_max",
        ):
            lines.append(f"| {key} | {_fmt(report.get(key))} |")
        lines.append(f"| grid points | {_fmt(report['grid_used'].get('size'))} |")
        certificate = report.get("certificate")
        lines.append(f"| threshold multiplier | {_fmt(certificate['theta']) if certificate else 'none'} |")
        lines.append("")

    if record.alternatives:
        lines += ["## Theta sweep", "", "| Theta | sup P_e | passed | error |", "|---|---|---|---|"]
        for alt in record.alternatives:
            lines.append(f"| {_fmt(alt.theta)} | {_fmt(alt.sup_error_psd)} | {alt.passed} | {_fmt(alt.error)} |")
        lines.append("")

    if record.realization:
        lines += ["## Realization", "", "| parameter | value |", "|---|---|"]
        lines += [f"| {key} | {_fmt(value)} |" for key, value in record.realization.items()]
        lines.append("")
    return "\n".join(lines)


class ExportStage(Stage):
    """
    Stage that writes the run artifacts into an output directory.

    Files:
        design.json: the DesignRecord
        psd.csv: omega, P_e, P_y_minus_u, gamma_sq
        bode.csv: omega, mag/phase of every block
        summary.md, summary.html: human-readable run summary
    """

    def __init__(self) -> None:
        super().__init__("export")

    def run(
        self,
        record: DesignRecord,
        channel: ChannelModel,
        design: Equalizer,
        output_dir: str,
        nodes: Any = None,
        **kwargs,
    ) -> StageResult:
        out = Path(output_dir)
        try:
            omegas = plot_omegas(channel, nodes)
            paths = {
                "design": atomic_write_text(out / "design.json", record.to_json()),
                "psd": write_csv(psd_frame(channel, design, omegas), out / "psd.csv"),
                "bode": write_csv(bode_frame(design, omegas), out / "bode.csv"),
            }
            summary = summary_markdown(record)
            paths["summary_md"] = atomic_write_text(out / "summary.md", summary)
            paths["summary_html"] = atomic_write_text(
                out / "summary.html", render_html(summary, f"Equalizer design: {record.method}")
            )
        except CoheqError as exc:
            logger.warning("Export failed: %s", exc.message)
            return StageResult.failure(exc)
        except OSError as exc:
            return StageResult(success=False, error=f"Failed to write outputs: {exc}", error_code="OutputError")
        logger.info("Wrote %d artifacts to %s", len(paths), out)
        return StageResult(success=True, data={"paths": {key: str(path) for key, path in paths.items()}})
