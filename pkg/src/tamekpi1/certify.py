"""K(pi,1) certificates: assembly, canonical JSON, and independent re-verification."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arith import is_prime, primitive_root
from .cohom import KOCH_DEFECT_NOTE, global_dimensions, h2_defect
from .errors import NotCertifiable, PreconditionViolation, SchemaMismatch
from .fields import FieldDescriptor, PrimeSet
from .lie import reduce_mod_pi, strongly_free_oracle
from .linking import LinkingData, linking_data
from .mild import MildWitness, cup_data, find_mild_witness, initial_forms, mildkrit_check
from .search import SearchDomain, augment_to_mild

VERSION = "1"

CONSEQUENCES = {
    "cd2": "cd G_S(p) = 2",
    "scd3": "scd G_S(p) = 3",
    "duality_group": "G_S(p) is a duality group of dimension 2 with dualizing module tor_p C_S(k_S(p)) (stated, not computed)",
    "local_max_p_extension": "k_S(p)_q = k_q(p) for every q in S",
    "universal_norms_vanish": "lim O_K^x (x) Z_p = 0 = lim O_{K,S}^x (x) Z_p over finite K in k_S(p), norm transition maps",
    "riemann_existence": "Gal(k_S'(p)|k_S(p)) is the free pro-p product of the inertia groups at primes above S' - S",
}

SIGN_CONVENTION = (
    "rho_q = a_q*pi*x_q + sum_{q' != q} lk(q'->q)*[x_q,x_q']; "
    "cup(q,(k,l)) = -coefficient of [x_k,x_l] in rho_q mod pi; "
    "lk normalised by the smallest primitive root of each prime"
)

REQUIRED_KEYS = {
    "version", "field", "p", "input_primes", "primes", "augmentation", "linking",
    "dimensions", "witness", "oracle", "assumptions", "consequences",
}


def canonical_dumps(obj) -> str:
    """Sorted keys, no whitespace, ASCII; floats are rejected."""
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _reject_floats(obj):
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in certificates")
    if isinstance(obj, dict):
        for v in obj.values():
            _reject_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _reject_floats(v)


@dataclass
class Certificate:
    field: str
    p: int
    input_primes: list
    primes: list
    linking: LinkingData
    dimensions: dict
    witness: MildWitness
    oracle: dict
    assumptions: list
    consequences: list
    augmentation: dict | None = None
    version: str = VERSION

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "field": self.field,
            "p": self.p,
            "input_primes": list(self.input_primes),
            "primes": list(self.primes),
            "augmentation": self.augmentation,
            "linking": self.linking.to_json(),
            "dimensions": self.dimensions,
            "witness": self.witness.to_json(),
            "oracle": self.oracle,
            "assumptions": self.assumptions,
            "consequences": self.consequences,
        }

    def dumps(self) -> str:
        return canonical_dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> Certificate:
        if not isinstance(obj, dict):
            raise SchemaMismatch("certificate must be a JSON object")
        missing = REQUIRED_KEYS - set(obj)
        extra = set(obj) - REQUIRED_KEYS
        if missing or extra:
            raise SchemaMismatch(f"missing keys {sorted(missing)}, unexpected keys {sorted(extra)}")
        if obj["version"] != VERSION:
            raise SchemaMismatch(f"unsupported certificate version {obj['version']!r}")
        try:
            return cls(
                field=obj["field"],
                p=int(obj["p"]),
                input_primes=list(obj["input_primes"]),
                primes=list(obj["primes"]),
                linking=LinkingData.from_json(obj["linking"]),
                dimensions=dict(obj["dimensions"]),
                witness=MildWitness.from_json(obj["witness"]),
                oracle=dict(obj["oracle"]),
                assumptions=list(obj["assumptions"]),
                consequences=list(obj["consequences"]),
                augmentation=obj["augmentation"],
                version=obj["version"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaMismatch(f"malformed certificate: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> Certificate:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaMismatch(f"not JSON: {exc}") from None
        return cls.from_json(obj)


def _oracle(ld: LinkingData, D: int):
    forms = [reduce_mod_pi(r) for r in initial_forms(ld, max(D, 2))]
    if any(r.is_zero() for r in forms):
        raise NotCertifiable("a relation's initial form vanishes modulo pi")
    return strongly_free_oracle(ld.n, forms, D, ld.p)


def _consequences(h1: int) -> list[dict]:
    if h1 < 1:
        return []
    tags = ["cd2", "scd3", "duality_group", "local_max_p_extension", "universal_norms_vanish"]
    return [{"tag": t, "text": CONSEQUENCES[t]} for t in tags]


def certify(fld: FieldDescriptor, p: int, S, dom: SearchDomain | None = None, lie_degree: int = 6) -> Certificate:
    """Certify Spec(Z) - S as a K(pi,1) for p, augmenting S when a search domain is given."""
    if not fld.is_rational:
        raise PreconditionViolation("certificates are issued over Q only")
    if p == 2 or not is_prime(p):
        raise PreconditionViolation("p must be an odd prime")
    primes = S.primes if isinstance(S, PrimeSet) else sorted(int(q) for q in S)
    if not primes:
        raise PreconditionViolation("S must be nonempty")
    for q in primes:
        if q == p or (q - 1) % p or not is_prime(q):
            raise PreconditionViolation(f"{q} is not an admissible prime for p={p}")

    ld = linking_data(primes, p)
    witness = find_mild_witness(ld)
    augmentation = None
    if not witness:
        if dom is None:
            raise NotCertifiable(f"no witness for S={primes} and no search domain given ({witness.reason})")
        if dom.p != p:
            raise PreconditionViolation("search domain built for a different p")
        aug = augment_to_mild(primes, dom, fld)
        ld = aug.linking
        witness = aug.witness
        augmentation = {
            "bound": dom.bound,
            "moved": list(aug.moved),
            "added": list(aug.T1),
            "steps": [
                {"kind": s["kind"], "chosen": s["chosen"],
                 "conditions": s["transcript"]["conditions"],
                 "rejected_count": s["transcript"]["rejected_count"]}
                for s in aug.steps
            ],
        }

    final = PrimeSet.of(list(ld.primes))
    dims = global_dimensions(fld, p, final)
    defect, _ = h2_defect(fld, p, final)
    if defect != 0:
        raise NotCertifiable(f"h2-defect {defect} != 0")
    verdict = _oracle(ld, lie_degree)
    if not verdict.strongly_free:
        raise NotCertifiable(f"series oracle disagrees with the witness at degree {verdict.first_mismatch}")

    assumptions = [
        {"label": "h2_defect", "text": KOCH_DEFECT_NOTE},
        {"label": "sign_convention", "text": SIGN_CONVENTION},
        {"label": "oracle_cutoff", "text": f"strong freeness of the reduced initial forms verified through degree {lie_degree}"},
    ]
    if augmentation is not None:
        assumptions.append({"label": "density", "text": f"density-one prime set replaced by admissible primes <= {dom.bound}"})
        assumptions.append({"label": "unit_condition", "text": "unit condition of the prime search is vacuous over Q for odd p"})

    return Certificate(
        field=str(fld),
        p=p,
        input_primes=list(primes),
        primes=list(ld.primes),
        linking=ld,
        dimensions=dims.to_json(),
        witness=witness,
        oracle=verdict.to_json(),
        assumptions=assumptions,
        consequences=_consequences(dims.h1),
        augmentation=augmentation,
    )


@dataclass
class VerifyReport:
    ok: bool
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def verify_report(cert: Certificate | dict | str, lie_degree: int | None = None) -> VerifyReport:
    """Recompute every stored quantity from the prime list alone and compare."""
    if isinstance(cert, str):
        cert = Certificate.loads(cert)
    elif isinstance(cert, dict):
        cert = Certificate.from_json(cert)
    rep = VerifyReport(ok=False)
    c = rep.checks
    p = cert.p
    primes = list(cert.primes)

    c["field"] = cert.field == "Q" and is_prime(p) and p != 2
    c["primes_admissible"] = bool(primes) and primes == sorted(set(primes)) and all(
        is_prime(q) and (q - 1) % p == 0 for q in primes
    )
    if not (c["field"] and c["primes_admissible"]):
        return rep
    if cert.augmentation is not None:
        c["augmentation"] = sorted(
            cert.input_primes + cert.augmentation.get("moved", []) + cert.augmentation.get("added", [])
        ) == primes
    else:
        c["augmentation"] = sorted(cert.input_primes) == primes

    ld = linking_data(primes, p)
    c["linking"] = ld.to_json() == cert.linking.to_json() and list(ld.roots) == [primitive_root(q) for q in primes]

    fld = FieldDescriptor.rationals()
    c["dimensions"] = global_dimensions(fld, p, PrimeSet.of(primes)).to_json() == cert.dimensions

    n = ld.n
    w = cert.witness
    try:
        fresh = mildkrit_check(cup_data(ld), n, n, list(w.ordering), w.a, p)
    except ValueError:
        fresh = None
    c["witness"] = fresh is not None and fresh == w and w.rank == n

    stored_D = cert.oracle.get("checked_degree")
    D = stored_D if lie_degree is None else lie_degree
    verdict = _oracle(ld, D)
    if D == stored_D:
        c["oracle"] = verdict.to_json() == cert.oracle
    else:
        k = min(D, stored_D) + 1
        c["oracle"] = (
            verdict.strongly_free
            and cert.oracle.get("strongly_free") is True
            and verdict.expected[:k] == cert.oracle["expected"][:k]
            and verdict.actual[:k] == cert.oracle["actual"][:k]
        )
        if D > stored_D:
            rep.notes.append(f"oracle extended from degree {stored_D} to {D}")

    tags = [x.get("tag") for x in cert.consequences]
    c["consequences"] = set(tags) <= set(CONSEQUENCES) and cert.consequences == _consequences(cert.dimensions.get("h1", 0))
    rep.ok = all(c.values())
    return rep


def verify(cert, lie_degree: int | None = None) -> bool:
    return verify_report(cert, lie_degree).ok
