import pytest
from numpy.testing import assert_allclose

from graphscatter.errors import DuplicateEdge, ParseError
from graphscatter.io import (
    load_graph_dataset,
    load_molecules,
    load_targets,
    read_edge_list,
)


class TestEdgeList:
    def test_basic(self):
        adjacency, weights = read_edge_list("0 1 1.0\n1 2 2.5\n")
        assert weights is None
        assert_allclose(adjacency, [[0, 1, 0], [1, 0, 2.5], [0, 2.5, 0]])

    def test_comments_and_blanks(self):
        adjacency, _ = read_edge_list("# a comment\n\n0 1 1\n")
        assert adjacency.shape == (2, 2)

    def test_weights_header(self):
        adjacency, weights = read_edge_list("weights: 1 1 2\n0 1 1\n")
        assert_allclose(weights, [1, 1, 2])
        assert adjacency.shape == (3, 3)

    def test_duplicate_edge(self):
        with pytest.raises(DuplicateEdge):
            read_edge_list("0 1 1\n1 0 2\n")

    def test_malformed_weight(self):
        with pytest.raises(ParseError) as exc:
            read_edge_list("0 1 one\n")
        assert exc.value.line == 1

    def test_malformed_shape(self):
        with pytest.raises(ParseError):
            read_edge_list("0 1\n")

    def test_from_file(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("0 1 1\n")
        adjacency, _ = read_edge_list(p)
        assert adjacency[0, 1] == 1


class TestMultiGraphDataset:
    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("")
        assert load_graph_dataset(p) == []

    def test_two_records_in_id_order(self, tmp_path):
        p = tmp_path / "two.txt"
        p.write_text("graph b 1\n0 1\ngraph a 0\n0 1\n1 2\n")
        records = load_graph_dataset(p)
        assert [r.id for r in records] == ["a", "b"]
        assert records[0].adjacency.shape == (3, 3)
        assert records[0].label == 0
        assert records[1].label == 1

    def test_unit_weights(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("graph g\n0 1\n0 2\n")
        rec = load_graph_dataset(p)[0]
        assert rec.adjacency.max() == 1.0
        assert rec.label is None

    def test_duplicate_edge(self, tmp_path):
        p = tmp_path / "dup.txt"
        p.write_text("graph g\n0 1\n1 0\n")
        with pytest.raises(DuplicateEdge):
            load_graph_dataset(p)

    def test_edge_before_header(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("0 1\n")
        with pytest.raises(ParseError) as exc:
            load_graph_dataset(p)
        assert exc.value.line == 1

    def test_malformed_token(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("graph g\n0 x\n")
        with pytest.raises(ParseError) as exc:
            load_graph_dataset(p)
        assert exc.value.line == 2


class TestAdjacencyCsv:
    def test_directory(self, tmp_path):
        (tmp_path / "b.csv").write_text("0,1\n1,0\n")
        (tmp_path / "a.csv").write_text("0,1,0\n1,0,1\n0,1,0\n")
        records = load_graph_dataset(tmp_path, fmt="adjacency_csv")
        assert [r.id for r in records] == ["a", "b"]
        assert records[0].adjacency.shape == (3, 3)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            load_graph_dataset(tmp_path, fmt="graphml")


class TestMolecules:
    def test_records(self, tmp_path):
        p = tmp_path / "mols.txt"
        p.write_text("1 0 0 0\n1 1 0 0\n\n6 0 0 0\n8 0 0 1.2\n1 1 1 1\n")
        mols = load_molecules(p)
        assert [m.id for m in mols] == ["0", "1"]
        assert_allclose(mols[0].charges, [1, 1])
        assert mols[1].positions.shape == (3, 3)

    def test_malformed(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1 0 0\n")
        with pytest.raises(ParseError):
            load_molecules(p)

    def test_targets(self, tmp_path):
        p = tmp_path / "targets.csv"
        p.write_text("molecule_id,energy_kcal_per_mol\n0,-417.2\n1,-712.0\n")
        targets = load_targets(p)
        assert targets == {"0": -417.2, "1": -712.0}

    def test_targets_no_header(self, tmp_path):
        p = tmp_path / "targets.csv"
        p.write_text("0,-1.5\n")
        assert load_targets(p) == {"0": -1.5}
