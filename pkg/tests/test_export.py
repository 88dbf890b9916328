import csv
from pathlib import Path

from equivariant_covers.export import export_problems_csv
from equivariant_covers.problem import CyclicData, ProblemSpec, enumerate_problems
from equivariant_covers.schema import CSV_COLUMNS


def test_export_writes_header_and_rows(tmp_path: Path):
    specs = enumerate_problems(CyclicData(3, (1, 1, 2, 2)), 5)
    out = export_problems_csv(specs, tmp_path / "sub" / "problems.csv")

    with out.open(encoding="utf-8", newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(specs)
    case_c = ProblemSpec(CyclicData(3, (1, 1, 2, 2)), (-2, -2, 2, -1), (2, 3), 3, 0)
    row = rows[specs.index(case_c)]
    assert row == {
        "d": "5",
        "r": "3",
        "xi": "1 1 2 2",
        "ord": "-2 -2 2 -1",
        "B": "2 3",
        "t0": "3",
        "tinf": "0",
        "total": "4",
    }


def test_export_empty_list_writes_header_only(tmp_path: Path):
    out = export_problems_csv([], tmp_path / "empty.csv")
    assert out.read_text(encoding="utf-8").splitlines() == [",".join(CSV_COLUMNS)]
