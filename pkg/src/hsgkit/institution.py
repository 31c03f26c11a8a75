"""Finite institutions and satisfaction-preserving morphisms between them."""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import MalformedInputError
from .report import Finding, Report


def _freeze2(m):
    return MappingProxyType({k: MappingProxyType(dict(v)) for k, v in m.items()})


@dataclass(frozen=True)
class Institution:
    """Signatures with finite sentence and model sets and a satisfaction table.

    ``satisfies[sig][(model, sentence)]`` is a bool.
    """

    signatures: tuple
    sentences: Mapping[str, tuple]
    models: Mapping[str, tuple]
    satisfies: Mapping[str, Mapping[tuple, bool]]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "signatures", tuple(self.signatures))
        object.__setattr__(self, "sentences", MappingProxyType({k: tuple(v) for k, v in self.sentences.items()}))
        object.__setattr__(self, "models", MappingProxyType({k: tuple(v) for k, v in self.models.items()}))
        object.__setattr__(self, "satisfies", _freeze2(self.satisfies))

    def validate(self):
        for s in self.signatures:
            if s not in self.sentences or s not in self.models or s not in self.satisfies:
                raise MalformedInputError(f"{self.name or 'institution'}: tables missing for signature {s!r}")
            table = self.satisfies[s]
            for m in self.models[s]:
                for phi in self.sentences[s]:
                    if (m, phi) not in table:
                        raise MalformedInputError(f"{self.name or 'institution'}: satisfaction of {phi!r} in {m!r} undefined")

    def sat(self, sig, model, sentence) -> bool:
        return bool(self.satisfies[sig][(model, sentence)])


@dataclass(frozen=True)
class InstitutionMorphism:
    """Maps signatures, sentences and models forward.

    The checked condition is ``M ⊨ φ ⇒ φ_Mod(M) ⊨' φ_Sen(φ)``, which needs
    models to travel in the same direction as sentences.
    """

    source: Institution
    target: Institution
    signature_map: Mapping[str, str]
    sentence_map: Mapping[str, Mapping]
    model_map: Mapping[str, Mapping]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "signature_map", MappingProxyType(dict(self.signature_map)))
        object.__setattr__(self, "sentence_map", _freeze2(self.sentence_map))
        object.__setattr__(self, "model_map", _freeze2(self.model_map))


def identity_morphism(i: Institution) -> InstitutionMorphism:
    return InstitutionMorphism(
        i, i,
        {s: s for s in i.signatures},
        {s: {p: p for p in i.sentences[s]} for s in i.signatures},
        {s: {m: m for m in i.models[s]} for s in i.signatures},
        "id",
    )


def _validate_morphism(m: InstitutionMorphism):
    m.source.validate()
    m.target.validate()
    tgt_sigs = set(m.target.signatures)
    for s in m.source.signatures:
        if s not in m.signature_map or m.signature_map[s] not in tgt_sigs:
            raise MalformedInputError(f"signature map undefined or out of range at {s!r}")
        s2 = m.signature_map[s]
        sen, mod = m.sentence_map.get(s, {}), m.model_map.get(s, {})
        for phi in m.source.sentences[s]:
            if phi not in sen or sen[phi] not in set(m.target.sentences[s2]):
                raise MalformedInputError(f"sentence map undefined or out of range at {s!r}/{phi!r}")
        for x in m.source.models[s]:
            if x not in mod or mod[x] not in set(m.target.models[s2]):
                raise MalformedInputError(f"model map undefined or out of range at {s!r}/{x!r}")


def check_institution_morphism(m: InstitutionMorphism) -> Report:
    """List every (signature, model, sentence) where satisfaction is lost."""
    _validate_morphism(m)
    out = []
    for s in m.source.signatures:
        s2 = m.signature_map[s]
        for model in m.source.models[s]:
            for phi in m.source.sentences[s]:
                if not m.source.sat(s, model, phi):
                    continue
                model2, phi2 = m.model_map[s][model], m.sentence_map[s][phi]
                if not m.target.sat(s2, model2, phi2):
                    out.append(
                        Finding(
                            "satisfaction-lost",
                            f"{model} ⊨ {phi} in {s}, but {model2} ⊭ {phi2} in {s2}",
                            (s, model, phi),
                        )
                    )
    return Report(m.name or "institution morphism", tuple(out))
