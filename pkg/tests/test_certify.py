import copy
import json

import pytest

from tamekpi1.certify import (
    Certificate,
    canonical_dumps,
    certify,
    verify,
    verify_report,
)
from tamekpi1.errors import NotCertifiable, PreconditionViolation, SchemaMismatch
from tamekpi1.fields import FieldDescriptor
from tamekpi1.search import SearchDomain

Q = FieldDescriptor.rationals()


def test_certificate_shape(cert_7_13):
    c = cert_7_13
    assert c.input_primes == [7, 13]
    assert c.primes == [7, 13, 211, 6037]
    assert c.augmentation["added"] == [211, 6037]
    assert c.oracle["strongly_free"] and c.oracle["checked_degree"] == 6
    assert c.dimensions["h2"] == 4
    labels = {a["label"] for a in c.assumptions}
    assert {"h2_defect", "sign_convention", "oracle_cutoff", "density", "unit_condition"} <= labels
    assert {x["tag"] for x in c.consequences} >= {"cd2", "scd3"}


def test_round_trip_bytes(cert_7_13):
    text = cert_7_13.dumps()
    again = Certificate.loads(text)
    assert again.dumps() == text
    assert json.loads(text) == cert_7_13.to_json()


def test_rerun_identical(cert_7_13):
    again = certify(Q, 3, [13, 7], SearchDomain(3, 10**6))
    assert again.dumps() == cert_7_13.dumps()


def test_verify(cert_7_13):
    rep = verify_report(cert_7_13)
    assert rep.ok, rep.checks
    assert verify(cert_7_13.dumps())
    assert verify(cert_7_13.to_json())


def _tampered(cert, mutate):
    obj = copy.deepcopy(cert.to_json())
    mutate(obj)
    return obj


@pytest.mark.parametrize("name, mutate", [
    ("linking", lambda o: o["linking"]["e"][0].__setitem__(1, (o["linking"]["e"][0][1] + 1) % 3)),
    ("dimensions", lambda o: o["dimensions"].__setitem__("h1", 5)),
    ("witness", lambda o: o["witness"].__setitem__("a", 1)),
    ("witness", lambda o: o["witness"]["matrix"][0].__setitem__(0, (o["witness"]["matrix"][0][0] + 1) % 3)),
    ("oracle", lambda o: o["oracle"]["actual"].__setitem__(3, 0)),
    ("consequences", lambda o: o["consequences"].pop()),
    ("augmentation", lambda o: o.__setitem__("input_primes", [7, 19])),
    ("primes_admissible", lambda o: o.__setitem__("primes", [7, 11, 211, 6037])),
])
def test_tamper_detected(cert_7_13, name, mutate):
    rep = verify_report(_tampered(cert_7_13, mutate))
    assert not rep.ok
    assert rep.checks.get(name) is False


@pytest.mark.parametrize("text", [
    "[]",
    "{",
    '{"version": "1"}',
])
def test_schema_mismatch(text):
    with pytest.raises(SchemaMismatch):
        Certificate.loads(text)


def test_schema_version(cert_7_13):
    obj = cert_7_13.to_json()
    obj["version"] = "0"
    with pytest.raises(SchemaMismatch):
        Certificate.from_json(obj)
    obj = cert_7_13.to_json()
    obj["extra"] = 1
    with pytest.raises(SchemaMismatch):
        Certificate.from_json(obj)


def test_canonical_dumps():
    assert canonical_dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    with pytest.raises(TypeError):
        canonical_dumps({"x": 0.5})


def test_verify_at_higher_degree():
    cert = certify(Q, 3, [7, 13], SearchDomain(3, 10**6), lie_degree=4)
    rep = verify_report(cert, lie_degree=6)
    assert rep.ok, rep.checks
    assert rep.notes == ["oracle extended from degree 4 to 6"]


def test_direct_certificate_without_augmentation():
    cert = certify(Q, 3, [7, 13, 19, 103])
    assert cert.augmentation is None
    assert cert.witness.a == 2
    assert verify(cert)


def test_not_certifiable_without_domain():
    with pytest.raises(NotCertifiable):
        certify(Q, 3, [7, 13])


def test_certify_preconditions():
    with pytest.raises(PreconditionViolation):
        certify(FieldDescriptor.imaginary_quadratic(1), 3, [7])
    with pytest.raises(PreconditionViolation):
        certify(Q, 3, [11])
    with pytest.raises(PreconditionViolation):
        certify(Q, 9, [19])
    with pytest.raises(PreconditionViolation):
        certify(Q, 3, [])


def test_7_19_not_certifiable():
    with pytest.raises(NotCertifiable):
        certify(Q, 3, [7, 19])
