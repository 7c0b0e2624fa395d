import glob
import os

import pytest

from comodkit.coalgebra import make_grouplike, validate_coalgebra
from comodkit.comodule import free_comodule, validate_comodule
from comodkit.instancefile import (
    InstanceFile,
    InstanceSemanticError,
    InstanceSyntaxError,
    instance_digest,
    load_instance,
    parse_instance,
    serialize_instance,
)
from comodkit.linalg import RingSpec

from conftest import Z2

INSTANCE_DIR = os.path.join(os.path.dirname(__file__), "..", "instances")

GRADED = """
# comments are fine anywhere
[ring]
modulus = 2

[coalgebra]
rank = 2
delta 1 = 1*(1,1)
delta 2 = 1*(2,2)
counit = 1 1

[comodule M]
rank = 2
rho 1 = 1*(1,1)
rho 2 = 1*(2,2)
"""


def test_parse_standard_instance():
    inst = parse_instance(GRADED)
    assert inst.ring == RingSpec(2)
    assert inst.coalgebra == make_grouplike(Z2, 2)
    assert inst.comodule_named("M") == free_comodule(inst.coalgebra, 1)
    assert validate_coalgebra(inst.coalgebra).ok
    assert validate_comodule(inst.comodule_named("M")).ok


def test_round_trip_is_canonical():
    inst = parse_instance(GRADED)
    text = serialize_instance(inst)
    again = parse_instance(text)
    assert again == inst
    assert serialize_instance(again) == text


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(INSTANCE_DIR, "*.cmod"))))
def test_shipped_instances_round_trip(path):
    inst = load_instance(path)
    text = serialize_instance(inst)
    assert parse_instance(text) == inst
    assert serialize_instance(parse_instance(text)) == text


def test_basis_index_out_of_range():
    bad = GRADED.replace("delta 1 = 1*(1,1)", "delta 1 = 1*(1,3)")
    with pytest.raises(InstanceSemanticError) as exc:
        parse_instance(bad)
    assert "out of range" in str(exc.value)


def test_residue_out_of_range():
    bad = GRADED.replace("rho 1 = 1*(1,1)", "rho 1 = 7*(1,1)")
    with pytest.raises(InstanceSemanticError) as exc:
        parse_instance(bad)
    assert "coefficient" in str(exc.value)


def test_syntax_error_positions():
    bad = GRADED.replace("delta 1 = 1*(1,1)", "delta 1 = what")
    with pytest.raises(InstanceSyntaxError) as exc:
        parse_instance(bad)
    assert exc.value.line == 8
    assert exc.value.col == 11


def test_unknown_section_rejected():
    with pytest.raises(InstanceSyntaxError):
        parse_instance("[woods]\nmodulus = 2\n")


def test_duplicate_delta_rejected():
    bad = GRADED.replace("delta 2 = 1*(2,2)", "delta 1 = 1*(2,2)")
    with pytest.raises(InstanceSemanticError) as exc:
        parse_instance(bad)
    assert "duplicate" in str(exc.value)


def test_modulus_too_small():
    with pytest.raises(InstanceSemanticError):
        parse_instance("[ring]\nmodulus = 1\n")


def test_counit_length_enforced():
    bad = GRADED.replace("counit = 1 1", "counit = 1")
    with pytest.raises(InstanceSemanticError):
        parse_instance(bad)


def test_missing_rank_before_terms():
    bad = "\n".join([
        "[ring]", "modulus = 2", "[coalgebra]", "delta 1 = 1*(1,1)",
    ])
    with pytest.raises(InstanceSemanticError):
        parse_instance(bad)


def test_digest_tracks_content():
    inst = parse_instance(GRADED)
    other = parse_instance(GRADED.replace("modulus = 2", "modulus = 3")
                           .replace("counit = 1 1", "counit = 1 1"))
    assert instance_digest(inst) != instance_digest(other)
    assert instance_digest(inst) == instance_digest(parse_instance(GRADED))


def test_zero_rank_comodule_round_trip():
    text = "\n".join([
        "[ring]", "modulus = 4", "",
        "[coalgebra]", "rank = 1", "delta 1 = 1*(1,1)", "counit = 1", "",
        "[comodule Z]", "rank = 0", "",
    ])
    inst = parse_instance(text)
    assert inst.comodule_named("Z").rank == 0
    assert parse_instance(serialize_instance(inst)) == inst


def test_multiple_comodules_preserved_in_order():
    text = GRADED + "\n[comodule N]\nrank = 2\nrho 1 = 1*(1,2)\nrho 2 = 1*(2,1)\n"
    inst = parse_instance(text)
    assert [name for name, _ in inst.comodules] == ["M", "N"]
    assert parse_instance(serialize_instance(inst)) == inst


def test_coefficients_accumulate_within_a_line():
    # repeated tensor positions in one term list add up
    text = GRADED.replace("delta 1 = 1*(1,1)", "delta 1 = 1*(1,1) + 1*(1,1) + 1*(1,1)")
    inst = parse_instance(text)
    # over Z/2 the three copies collapse to one
    assert inst.coalgebra == make_grouplike(Z2, 2)
