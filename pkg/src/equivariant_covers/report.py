from __future__ import annotations

import json
from io import BytesIO
from typing import Any, Sequence

from reportlab.lib.pagesizes import A4
from reportlab.pdfgen import canvas

from .journal import RunRecord
from .schema import PDF_SECTIONS, SPEC_FIELDS


def _field(record: RunRecord, key: str) -> Any:
    if key in SPEC_FIELDS:
        return (record.spec or {}).get(key, "")
    value = getattr(record, key)
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(", ", ": "))
    return value


def build_report_pdf(title: str, records: Sequence[RunRecord]) -> bytes:
    """One section block per journal record, in journal order."""
    buf = BytesIO()
    c = canvas.Canvas(buf, pagesize=A4)
    width, height = A4

    c.setTitle(title)
    c.setFont("Helvetica-Bold", 16)
    c.drawString(50, height - 50, title)

    y = height - 80

    def new_line(pad=14):
        nonlocal y
        y -= pad
        if y < 60:
            c.showPage()
            y = height - 60

    def draw_text(text: str, font="Helvetica", size=10):
        c.setFont(font, size)
        max_chars = 105
        line = str(text)
        while len(line) > max_chars:
            c.drawString(50, y, line[:max_chars])
            new_line()
            line = "    " + line[max_chars:]
        c.drawString(50, y, line)
        new_line()

    if not records:
        draw_text("(journal is empty)")

    for n, record in enumerate(records, 1):
        c.setFont("Helvetica-Bold", 13)
        c.drawString(50, y, f"#{n} {record.command}")
        new_line(18)
        for section_title, keys in PDF_SECTIONS:
            if section_title == "Problem" and record.spec is None:
                continue
            c.setFont("Helvetica-Bold", 11)
            c.drawString(50, y, section_title)
            new_line(16)
            for k in keys:
                draw_text(f"{k}: {_field(record, k)}")
            new_line(6)
        new_line(10)

    c.showPage()
    c.save()
    return buf.getvalue()
