"""Tests for edge-list and roster ingestion."""

import pytest

from src.econet import load_edgelist, load_roster, location_popularity, neighborhood_sizes
from src.errors import EmptyNetworkError, ParseError, StorageError, ValidationError

HEADER = "individual_id,location_id,count\n"


def test_three_row_file(write_csv):
    path = write_csv("edges.csv", HEADER + "a,x,2\na,y,1\nb,x,1\n")
    net = load_edgelist(path)

    assert net.individuals == ("a", "b")
    assert net.locations == ("x", "y")
    assert net.row_sums.tolist() == [3, 1]


def test_duplicate_rows_are_summed(write_csv):
    path = write_csv("edges.csv", HEADER + "a,x,1\na,x,1\n")
    net = load_edgelist(path)

    assert net.counts[0, 0] == 2
    assert net.total_tokens == 2


def test_count_column_is_optional(write_csv):
    path = write_csv("edges.csv", "individual_id,location_id\na,x\na,x\nb,y\n")
    net = load_edgelist(path)

    assert net.row_sums.tolist() == [2, 1]


def test_empty_count_means_one(write_csv):
    path = write_csv("edges.csv", HEADER + "a,x,\nb,x,3\n")
    assert load_edgelist(path).row_sums.tolist() == [1, 3]


def test_first_appearance_order(write_csv):
    path = write_csv("edges.csv", HEADER + "c,z,1\na,y,1\nc,y,1\nb,x,1\n")
    net = load_edgelist(path)

    assert net.individuals == ("c", "a", "b")
    assert net.locations == ("z", "y", "x")


def test_negative_count_names_the_line(write_csv):
    path = write_csv("edges.csv", HEADER + "a,x,1\nb,y,-1\n")
    with pytest.raises(ValidationError, match=r":3: negative count"):
        load_edgelist(path)


def test_non_integer_count_is_a_parse_error(write_csv):
    path = write_csv("edges.csv", HEADER + "a,x,1\na,y,two\n")
    with pytest.raises(ParseError) as info:
        load_edgelist(path)
    assert info.value.line == 3


def test_missing_identifier_is_a_parse_error(write_csv):
    path = write_csv("edges.csv", HEADER + "a,,1\n")
    with pytest.raises(ParseError) as info:
        load_edgelist(path)
    assert info.value.line == 2


def test_missing_column_is_a_parse_error(write_csv):
    path = write_csv("edges.csv", "person,place\na,x\n")
    with pytest.raises(ParseError, match="location_id"):
        load_edgelist(path)


def test_header_only_file_is_empty(write_csv):
    with pytest.raises(EmptyNetworkError):
        load_edgelist(write_csv("edges.csv", HEADER))


def test_missing_file_is_a_storage_error(tmp_path):
    with pytest.raises(StorageError):
        load_edgelist(tmp_path / "nope.csv")


def test_zero_only_location_is_dropped(write_csv):
    path = write_csv("edges.csv", HEADER + "a,x,1\na,y,0\n")
    net = load_edgelist(path)

    assert net.locations == ("x",)


def test_roster_membership(write_csv):
    roster = load_roster(write_csv(
        "roster.csv",
        "individual_id,neighborhood_id,in_area\na,n1,1\nb,n2,0\nc,n1,1\n",
    ))
    net = load_edgelist(write_csv("edges.csv", HEADER + "a,x,1\nb,x,1\n"), roster=roster)

    assert net.individuals == ("a", "b", "c")
    assert net.row_sums.tolist() == [1, 1, 0]
    assert [net.neighborhood(i) for i in range(3)] == ["n1", "n2", "n1"]
    assert roster.get("b").in_area is False


def test_individual_missing_from_roster(write_csv):
    roster = load_roster(write_csv("roster.csv", "individual_id,neighborhood_id,in_area\na,n1,1\n"))
    path = write_csv("edges.csv", HEADER + "a,x,1\nz,x,1\n")
    with pytest.raises(ValidationError, match="not in the roster"):
        load_edgelist(path, roster=roster)


def test_roster_rejects_bad_flag(write_csv):
    path = write_csv("roster.csv", "individual_id,neighborhood_id,in_area\na,n1,yes\n")
    with pytest.raises(ParseError) as info:
        load_roster(path)
    assert info.value.line == 2


def test_roster_rejects_duplicates(write_csv):
    path = write_csv("roster.csv", "individual_id,neighborhood_id,in_area\na,n1,1\na,n2,1\n")
    with pytest.raises(ParseError, match="duplicate"):
        load_roster(path)


def test_location_popularity(small_network):
    table = location_popularity(small_network)

    assert table["rank"].tolist() == list(range(1, 7))
    assert table["n_visitors"].is_monotonic_decreasing
    assert int(table["n_reports"].sum()) == small_network.total_tokens
    # x5 is the only location with five visitors
    assert table.iloc[0]["location_id"] == "x5"


def test_neighborhood_sizes(small_network):
    assert neighborhood_sizes(small_network) == {"north": 4, "south": 4}
