import json
import os

import pandas as pd
import pytest

from src import documents, families
from src.core import CompositeSequence
from src.errors import DocumentError

SEQUENCES = [
    families.symmetric_half_pi(4),
    families.twin_asym(3, 0.75),
    families.bb1(0.5),
    families.prime_three(0.25, 2),
]


@pytest.mark.parametrize("seq", SEQUENCES, ids=lambda s: s.label)
def test_roundtrip_through_file(tmp_path, seq):
    path = tmp_path / "seq.json"
    documents.write_sequence(seq, str(path))
    back = documents.read_sequence(str(path))
    assert back.areas_pi == seq.areas_pi
    for got, want in zip(back.phases_pi, seq.canonical_phases_pi):
        assert got == pytest.approx(want, abs=1e-15)
    assert back.label == seq.label
    assert back.family == seq.family
    assert back.n == seq.n


def test_document_layout():
    doc = documents.sequence_to_document(families.asymmetric_half_pi(3))
    assert doc["schema_version"] == "1"
    assert [p["area_pi"] for p in doc["pulses"]] == [0.5, 1.0, 1.0]
    assert [p["phase_pi"] for p in doc["pulses"]] == [0.0, 0.4, 1.6]
    assert doc["metadata"]["family"] == "asym_half_pi"
    assert doc["metadata"]["N"] == 3
    assert doc["metadata"]["P_target"] == 0.5
    assert doc["metadata"]["total_area_pi"] == 2.5


def test_phases_written_in_canonical_range():
    seq = families.negate(families.asymmetric_half_pi(3))
    doc = documents.sequence_to_document(seq)
    assert all(0.0 <= p["phase_pi"] < 2.0 for p in doc["pulses"])


def _valid_doc():
    return documents.sequence_to_document(families.symmetric_half_pi(2))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("pulses"),
    lambda d: d.update(pulses=[]),
    lambda d: d.update(schema_version="2"),
    lambda d: d["pulses"][0].update(area_pi=-0.5),
    lambda d: d["pulses"][0].update(phase_pi="zero"),
    lambda d: d["pulses"][0].pop("area_pi"),
    lambda d: d["pulses"][1].update(area_pi=True),
    lambda d: d.update(metadata=[1, 2]),
])
def test_malformed_documents_rejected(mutate):
    doc = _valid_doc()
    mutate(doc)
    with pytest.raises(DocumentError):
        documents.document_to_sequence(doc)


def test_unreadable_files(tmp_path):
    with pytest.raises(DocumentError):
        documents.read_sequence(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(DocumentError):
        documents.read_sequence(str(broken))
    nan = tmp_path / "nan.json"
    nan.write_text(json.dumps({"schema_version": "1", "pulses": [{"area_pi": 0.5, "phase_pi": float("nan")}]}))
    with pytest.raises(DocumentError):
        documents.read_sequence(str(nan))


def test_csv_format():
    frame = pd.DataFrame({"eps": [-1.0, 0.0, 1.0], "probability": [0.0, 0.5, 1.0 / 3.0]})
    text = documents.frame_to_csv(frame)
    assert text.startswith("eps,probability\n")
    assert "\r" not in text
    assert text.splitlines()[3] == "1,0.333333333333333"


def test_atomic_write_leaves_no_temporaries(tmp_path):
    path = tmp_path / "out.csv"
    documents.write_csv(pd.DataFrame({"k": [0, 1], "coefficient": [0.5, 0.0]}), str(path))
    assert path.read_text() == "k,coefficient\n0,0.5\n1,0\n"
    assert os.listdir(tmp_path) == ["out.csv"]


def test_random_documents_roundtrip_exactly(tmp_path, rng):
    path = tmp_path / "seq.json"
    for _ in range(200):
        seq = CompositeSequence.from_phases(
            rng.choice([0.5, 1.0], size=4).tolist(), rng.uniform(-4.0, 4.0, size=4).tolist()
        )
        documents.write_sequence(seq, str(path))
        back = documents.read_sequence(str(path))
        assert back.phases_pi == seq.canonical_phases_pi
        assert back.areas_pi == seq.areas_pi
