from equivariant_covers.journal import new_record
from equivariant_covers.problem import CyclicData, ProblemSpec
from equivariant_covers.report import build_report_pdf


def test_pdf_bytes_starts_with_pdf_magic():
    spec = ProblemSpec(CyclicData(2, (1, 1, 1, 1)), (-1, -1, -1, -1), (3, 3), 4, 0)
    records = [
        new_record("count", spec, None, {}, {"segre": "1", "rho": "4", "total": "4"}),
        new_record("enumerate", None, None, {"r": 2, "xi": [1, 1, 1, 1], "dmax": 4}, ["x" * 400]),
    ]
    b = build_report_pdf("Runs", records)
    assert b[:4] == b"%PDF"


def test_empty_journal_still_renders():
    assert build_report_pdf("Runs", [])[:4] == b"%PDF"
