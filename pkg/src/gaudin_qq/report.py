"""Render HTML and Markdown summaries of emitted gaudin-qq documents."""

import logging
from collections.abc import Sequence
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, PackageLoader

from .codec import read_document
from .schema import ReportSection

logger = logging.getLogger(__name__)


def _mark(passed: bool) -> str:
    return "✅" if passed else "❌"


def _residual(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3e}"


def _poly_text(record: list) -> str:
    terms = []
    for power, c in enumerate(record):
        value = c if isinstance(c, str) else f"{c[0]:.6g}{c[1]:+.6g}j"
        if value in ("0", "0+0j"):
            continue
        terms.append(value if power == 0 else f"({value})·z^{power}")
    return " + ".join(terms) or "0"


def _solutions_section(doc: dict) -> tuple[str, list[str], list[list[str]], bool]:
    rows = []
    for index, sol in enumerate(doc["solutions"]):
        rows.append([
            str(index),
            sol["mode"],
            "; ".join(_poly_text(q) for q in sol["q_plus"]),
            _residual(sol["bethe_residual"]),
            _residual(max(sol["qq_residual"], default=0.0)),
            ", ".join(str(i + 1) for i, f in enumerate(sol["family"]) if f) or "-",
        ])
    count = len(rows)
    rows.extend(
        ["-", "unpaired", "; ".join(", ".join(map(str, node)) for node in u["roots"]), "", "", u["reason"]]
        for u in doc["unpaired"]
    )
    columns = ["#", "Mode", "q₊", "Bethe residual", "qq residual", "Resonant nodes"]
    return f"Solutions ({count})", columns, rows, count > 0 and not doc["unpaired"]


def _verify_section(doc: dict) -> tuple[str, list[str], list[list[str]], bool]:
    rows = []
    for check in doc["checks"]:
        worst = max((n["qq_residual"] for n in check["nodes"]), default=0.0)
        violations = check["nondegeneracy"]["violations"]
        rows.append([
            str(check["index"]),
            _residual(check["bethe_residual"]),
            _residual(worst),
            "; ".join(violations) or "-",
            _mark(check["passed"]),
        ])
    columns = ["#", "Bethe residual", "qq residual", "Nondegeneracy", "Passed"]
    return f"Verification (tolerance {doc['tolerance']:g})", columns, rows, doc["passed"]


def _orbit_section(doc: dict) -> tuple[str, list[str], list[list[str]], bool]:
    rows = [
        [
            entry["word"] or "e",
            "; ".join(_poly_text(q) for q in entry["q_plus"]),
            str(entry["weight"]),
            _mark(entry["weight_matches"]),
            _mark(entry["dot_weight_matches"]),
            _residual(entry["qq_residual"]),
        ]
        for entry in doc["entries"]
    ]
    rows.extend([f["word"], f["reason"], "", "", "", "failed"] for f in doc["failures"])
    rows.extend(
        [f"{b['first']} = {b['second']}", "braid relation", "", "", "", _mark(b["passed"])]
        for b in doc["braids"]
    )
    order = doc["weyl_order"] if doc["weyl_order"] is not None else "?"
    title = f"Full qq-system of {doc['group']} (|W| = {order}"
    title += ", truncated)" if doc["truncated"] else ")"
    columns = ["w", "q₊", "Weight", "w(Λ̌)", "w·Λ̌", "qq residual"]
    return title, columns, rows, doc["passed"]


def _wronskian_section(doc: dict) -> tuple[str, list[str], list[list[str]], bool]:
    rows = [
        ["matrix", check["name"], check.get("witness", ""), _mark(check["passed"])]
        for check in doc["matrix_checks"]
    ]
    rows.extend(
        ["relation", f"node {r['node']} {r['relation']}", _residual(r["residual"]), _mark(r["passed"])]
        for r in doc["relations"]
    )
    rows.extend(
        ["minor", f"w = {m['word'] or 'e'}, node {m['node']}", m["minor"], _mark(m["passed"])]
        for m in doc["minor_matches"]
    )
    rows.extend(
        ["kernel", f"B- entry ({k['row']}, {k['column']})", f"fixed up to c · ({k['direction']['text']})", "-"]
        for k in doc["tail_kernels"]
    )
    table = doc["minor_table"]
    agreeing = sum(row["row_set_agrees"] for row in table)
    rows.append([
        "table",
        f"{len(table)} generalized minors",
        f"{agreeing} agree with row/column-set minors",
        _mark(agreeing == len(table)),
    ])
    g = " | ".join(", ".join(entry["text"] for entry in row) for row in doc["g"])
    columns = ["Kind", "Check", "Detail", "Passed"]
    return f"G-Wronskian of {doc['group']}: G = [{g}]", columns, rows, doc["passed"]


_SECTIONS = {
    "gaudin-qq/solutions": _solutions_section,
    "gaudin-qq/verify": _verify_section,
    "gaudin-qq/orbit": _orbit_section,
    "gaudin-qq/wronskian": _wronskian_section,
}


def summarize(document: dict, source: str) -> ReportSection:
    """Flatten one document into a report table."""
    title, columns, rows, passed = _SECTIONS[document["format"]](document)
    return {"title": title, "source": source, "passed": passed, "columns": columns, "rows": rows}


def load_sections(paths: Sequence[str | Path]) -> list[ReportSection]:
    """Read documents and summarize each one, titled by file name."""
    return [summarize(read_document(path), Path(path).name) for path in paths]


def render_markdown(sections: Sequence[ReportSection]) -> str:
    """A Markdown summary with one table per document."""
    passed = all(section["passed"] for section in sections)
    markdown_content = f"# gaudin-qq report {_mark(passed)}\n\n"
    for section in sections:
        markdown_content += f"## {section['title']} {_mark(section['passed'])}\n\n"
        markdown_content += f"Source: `{section['source']}`\n\n"
        if not section["rows"]:
            markdown_content += "No rows.\n\n"
            continue
        markdown_content += "| " + " | ".join(section["columns"]) + " |\n"
        markdown_content += "|" + "---|" * len(section["columns"]) + "\n"
        for row in section["rows"]:
            cells = [cell.replace("|", "\\|") for cell in row]
            markdown_content += "| " + " | ".join(cells) + " |\n"
        markdown_content += "\n"
    return markdown_content


def _environment() -> Environment:
    try:
        return Environment(loader=PackageLoader("gaudin_qq", "templates"), autoescape=True)
    except (ImportError, ValueError):
        template_path = Path(__file__).parent / "templates"
        return Environment(loader=FileSystemLoader(str(template_path)), autoescape=True)


def generate_html_report(sections: Sequence[ReportSection], output_path: str | Path) -> Path:
    """Render the sections into a standalone HTML page."""
    template = _environment().get_template("report.html")
    html_content = template.render(
        sections=sections, passed=all(section["passed"] for section in sections)
    )
    output_path = Path(output_path)
    output_path.write_text(html_content)
    logger.info(f"HTML report written to {output_path}")
    return output_path


def generate(
    document_paths: Sequence[str | Path],
    output_html: str | Path | None = None,
    output_markdown: str | Path | None = None,
) -> str:
    """Render the given documents; returns the Markdown text."""
    sections = load_sections(document_paths)
    markdown = render_markdown(sections)
    if output_markdown is not None:
        Path(output_markdown).write_text(markdown)
        logger.info(f"Markdown report written to {output_markdown}")
    if output_html is not None:
        generate_html_report(sections, output_html)
    return markdown
