from __future__ import annotations

from pathlib import Path

import pytest

from asktable import build_value_index, load_table

# Desk fixture used throughout the suite: 6 rows, 7 columns, with "Marion"
# occurring in both City and County.
MINI6_CSV = """\
City,County,CourseType,Price,Holes,Difficulty,Terrain
Anderson,Madison,Private,Premium,18,Moderate,Varied
Greenfield,Hancock,Public,Low,18,Easy,Varied
Marion,Marion,Public,Low,9,Easy,Flat
Marion,Marion,Public,Premium,18,Hard,Rolling
Lebanon,Boone,Public,Low,18,Easy,Rolling
Marion,Marion,Private,Premium,18,Hard,Hilly
"""

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "asktable" / "data"


@pytest.fixture(scope="session")
def mini6():
    return load_table(MINI6_CSV, source_name="mini6.csv")


@pytest.fixture(scope="session")
def mini6_index(mini6):
    return build_value_index(mini6)


@pytest.fixture()
def mini6_path(tmp_path):
    path = tmp_path / "mini6.csv"
    path.write_text(MINI6_CSV)
    return path


@pytest.fixture(scope="session")
def golf127():
    return load_table(
        (DATA_DIR / "golf127.csv").read_text(), source_name="golf127.csv"
    )


@pytest.fixture(scope="session")
def golf127_index(golf127):
    return build_value_index(golf127)


@pytest.fixture(scope="session")
def corpus_text():
    return (DATA_DIR / "tasks.corpus").read_text()
