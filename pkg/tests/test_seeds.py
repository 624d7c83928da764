import shutil

import pytest

from coxtorus import seeds


def test_seed_files_load():
    assert len(seeds.load_generators()) == 20
    assert len(seeds.load_degree_matrix()) == 20
    assert len(seeds.load_charts()) == 7
    assert {"Z0", "Z1", "Z2", "ZP"} <= set(seeds.load_components())
    b = seeds.load_bundles()
    assert len(b["S"]) == 9 and (2, 1) in [tuple(x) for x in b["S"]]
    assert len(seeds.load_diagram()) == 268


def test_chart_listed_ranges_expand():
    u1 = seeds.load_charts()[0]
    assert u1.listed[:7] == [f"w0{k}" for k in range(1, 8)]


def test_truncated_degree_matrix_is_data_error(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(seeds.default_data_dir(), d)
    path = d / "degree_matrix.txt"
    lines = path.read_text().splitlines()
    path.write_text("\n".join(line.rsplit(" ", 1)[0] if line.startswith("tw2") else line for line in lines))
    with pytest.raises(seeds.SeedDataError):
        seeds.load_degree_matrix(d)


def test_missing_file_is_data_error(tmp_path):
    with pytest.raises(seeds.SeedDataError):
        seeds.load_generators(tmp_path)
