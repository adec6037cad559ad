"""Certificate serialization and independent re-verification.

A certificate must carry everything needed to re-check it from scratch:
the host (or its factors), the terminals, and every tree edge by name.
"""

from __future__ import annotations

import json

import pytest

from genconn.certificates import (CertificateError, certificate_set,
                                  dump_certificate, load_certificate,
                                  packing_certificate, parse_vertex,
                                  rebuild_host, reverify, vertex_name)
from genconn.graphs import family, lexicographic_product
from genconn.steiner import max_tree_packing


def product_doc():
    P = lexicographic_product(family("path", 4), family("path", 3))
    S = (P.flatten(0, 0), P.flatten(1, 1), P.flatten(3, 2))
    pack = max_tree_packing(P, S)
    return P, S, packing_certificate(P, S, pack.trees,
                                     stats={"nodes": pack.nodes})


def plain_doc():
    G = family("cycle", 5)
    pack = max_tree_packing(G, (0, 2, 3))
    return G, packing_certificate(G, (0, 2, 3), pack.trees)


class TestNames:
    def test_product_vertices_use_coordinates(self):
        P = lexicographic_product(family("path", 3), family("path", 3))
        assert vertex_name(P, P.flatten(2, 1)) == "2:1"
        assert parse_vertex(P, "2:1") == P.flatten(2, 1)

    def test_plain_vertices_are_bare_integers(self):
        G = family("path", 3)
        assert vertex_name(G, 2) == "2"
        assert parse_vertex(G, "2") == 2

    def test_bad_names_rejected(self):
        P = lexicographic_product(family("path", 3), family("path", 3))
        for bad in ("9:9", "1", "a:b", ":", ""):
            with pytest.raises(CertificateError):
                parse_vertex(P, bad)


class TestRoundTrip:
    def test_product_certificate(self):
        P, S, doc = product_doc()
        text = dump_certificate(doc)
        loaded = load_certificate(text)
        assert reverify(loaded).ok
        host = rebuild_host(loaded["host"])
        assert host.n == P.n and host.edges() == P.edges()

    def test_plain_certificate(self):
        G, doc = plain_doc()
        assert reverify(load_certificate(dump_certificate(doc))).ok

    def test_dump_is_stable(self):
        _, _, doc = product_doc()
        once = dump_certificate(doc)
        again = dump_certificate(load_certificate(once))
        assert once == again
        assert once.endswith("\n")

    def test_verdict_recorded_ok(self):
        _, _, doc = product_doc()
        assert doc["verdict"]["ok"] is True
        assert doc["stats"]["nodes"] >= 0

    def test_certificate_set_roundtrip(self):
        _, _, a = product_doc()
        _, b = plain_doc()
        bundle = certificate_set([a, b])
        loaded = load_certificate(dump_certificate(bundle))
        assert loaded["kind"] == "certificate_set"
        assert len(loaded["items"]) == 2
        assert all(reverify(item).ok for item in loaded["items"])


class TestTampering:
    def test_deleting_a_middle_edge_breaks_the_tree(self):
        _, _, doc = product_doc()
        tree = doc["trees"][0]
        # drop an edge between two internal-or-terminal vertices whose
        # endpoints both stay in the tree, so the defect is disconnection
        names = {}
        for u, v in tree["edges"]:
            names[u] = names.get(u, 0) + 1
            names[v] = names.get(v, 0) + 1
        middle = next(i for i, (u, v) in enumerate(tree["edges"])
                      if names[u] > 1 and names[v] > 1)
        del tree["edges"][middle]
        verdict = reverify(doc)
        assert not verdict.ok
        assert "not a tree" in verdict.reason or "disconnected" in verdict.reason

    def test_deleting_a_leaf_edge_drops_a_terminal(self):
        G, doc = plain_doc()
        tree = doc["trees"][0]
        term = set(doc["terminals"])
        names = {}
        for u, v in tree["edges"]:
            names[u] = names.get(u, 0) + 1
            names[v] = names.get(v, 0) + 1
        leaf = next(i for i, (u, v) in enumerate(tree["edges"])
                    if (names[u] == 1 and u in term)
                    or (names[v] == 1 and v in term))
        del tree["edges"][leaf]
        verdict = reverify(doc)
        assert not verdict.ok and "misses terminal" in verdict.reason

    def test_duplicating_a_tree_is_caught(self):
        _, _, doc = product_doc()
        doc["trees"].append(doc["trees"][0])
        verdict = reverify(doc)
        assert not verdict.ok and "share" in verdict.reason

    def test_recorded_verdict_must_agree(self):
        _, _, doc = product_doc()
        doc["verdict"]["ok"] = False
        verdict = reverify(doc)
        assert not verdict.ok and "recorded verdict" in verdict.reason

    def test_editing_the_host_invalidates_trees(self):
        G, doc = plain_doc()
        doc["host"]["factors"][0]["edges"] = doc["host"]["factors"][0]["edges"][:-1]
        verdict = reverify(doc)
        assert not verdict.ok


class TestMalformedInput:
    @pytest.mark.parametrize("text", [
        "", "not json", "[]", "{}",
        json.dumps({"kind": "certificate"}),
        json.dumps({"kind": "something_else", "items": []}),
    ])
    def test_rejected_with_certificate_error(self, text):
        with pytest.raises(CertificateError):
            load_certificate(text)

    def test_unknown_product_kind(self):
        _, _, doc = product_doc()
        doc["host"]["product_kind"] = "tensor"
        with pytest.raises(CertificateError):
            load_certificate(dump_certificate(doc))

    def test_missing_trees_key(self):
        _, _, doc = product_doc()
        del doc["trees"]
        with pytest.raises(CertificateError):
            load_certificate(dump_certificate(doc))

    def test_repeated_terminal_rejected_at_reverify(self):
        _, _, doc = product_doc()
        doc["terminals"] = [doc["terminals"][0]] * 3
        verdict = reverify(doc)
        assert not verdict.ok
