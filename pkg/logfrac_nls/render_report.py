"""Render an experiment report as a PDF."""
import json
import os
from pathlib import Path

from reportlab.lib import colors
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from .sim_types import ExperimentReport, Verdict


VERDICT_COLORS = {
    Verdict.PASS: colors.HexColor("#E2F0D9"),
    Verdict.FAIL: colors.HexColor("#F8D7DA"),
    Verdict.DIAGNOSTIC: colors.HexColor("#F2F2F2"),
}


def escape(s: str) -> str:
    """Escape HTML entities for ReportLab."""
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_report_pdf(report: ExperimentReport, output_path: Path) -> Path:
    """
    Render one ExperimentReport: verdict table, configuration echo and artifacts.

    Args:
        report: the report to render
        output_path: where the PDF is written (parent directories are created)
    """
    output_path = Path(output_path)
    os.makedirs(output_path.parent, exist_ok=True)

    styles = getSampleStyleSheet()
    body = styles["BodyText"]
    doc = SimpleDocTemplate(
        str(output_path),
        pagesize=letter,
        leftMargin=0.75 * inch,
        rightMargin=0.75 * inch,
        topMargin=0.75 * inch,
        bottomMargin=0.75 * inch,
        title=f"Experiment report: {report.name}",
    )
    story = []

    def h(text: str, level: int = 2):
        style = styles["Heading1"] if level == 1 else styles["Heading2"]
        story.append(Paragraph(escape(text), style))
        story.append(Spacer(1, 6))

    def p(text: str):
        story.append(Paragraph(escape(text), body))
        story.append(Spacer(1, 6))

    h(f"Experiment: {report.name}", level=1)
    p(f"Status: {'PASS' if report.passed else 'FAIL'}")
    if report.error:
        p(f"Aborted: {report.error}")
    story.append(Spacer(1, 12))

    h("ASSERTIONS")
    if report.assertions:
        table_data = [[Paragraph(escape(c), body) for c in ("Check", "Verdict", "Ref", "Estimate", "Result")]]
        row_styles = []
        for i, a in enumerate(report.assertions, start=1):
            table_data.append([
                Paragraph(escape(a.name), body),
                Paragraph(escape(a.verdict.value), body),
                Paragraph(escape(a.ref), body),
                Paragraph(escape(a.estimate), body),
                Paragraph(escape(a.message or "-"), body),
            ])
            row_styles.append(("BACKGROUND", (1, i), (1, i), VERDICT_COLORS[a.verdict]))
        t = Table(table_data, colWidths=[1.5 * inch, 0.7 * inch, 1.1 * inch, 1.7 * inch, 2.0 * inch], repeatRows=1)
        t.setStyle(TableStyle([
            ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
            ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#D9D9D9")),
            ("GRID", (0, 0), (-1, -1), 0.25, colors.HexColor("#BFBFBF")),
            ("VALIGN", (0, 0), (-1, -1), "TOP"),
            ("LEFTPADDING", (0, 0), (-1, -1), 4),
            ("RIGHTPADDING", (0, 0), (-1, -1), 4),
        ] + row_styles))
        story.append(t)
    else:
        p("None")
    story.append(Spacer(1, 12))

    h("REFERENCES")
    for ref, statement in report.to_dict()["references"].items():
        p(f"{ref}: {statement}")
    story.append(Spacer(1, 12))

    h("CONFIGURATION")
    for line in json.dumps(report.config, indent=2, sort_keys=True).splitlines():
        story.append(Paragraph(escape(line).replace(" ", "&nbsp;"), styles["Code"]))
    story.append(Spacer(1, 12))

    h("ARTIFACTS")
    for path in report.artifacts:
        story.append(Paragraph(f"• {escape(path)}", body))

    doc.build(story)
    return output_path
