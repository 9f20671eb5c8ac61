"""
Built-in potentials and potential spec files.

Built-ins:
    zero                the zero potential
    constant:<kappa>    f = kappa everywhere
    example1[:<b1>]     a_p = -4 (1/2)^p, c_p = -9 (1/3)^p, b_p = a_2+...+a_p,
                        d_p = c_2+...+c_p for p >= 2, b_1 = d_1 = b1 (default -1)
    thm2                a_2 = -10, a_j = -2^{2-j} (j >= 3), c_j = -2^{2-j}, b = d = -1
    thm2-mirror         thm2 under the symbol flip
    symmetric           a_j = c_j = -2^{2-j}, b = d = -1
"""
import json
from pathlib import Path
from typing import Optional

from walters_thermo.errors import SpecValidationError
from walters_thermo.logging_config import get_logger
from walters_thermo.potential import ConstantTail, GeometricTail, SequenceSpec, WaltersPotential

logger = get_logger(__name__)

BUILTIN_NAMES = ("zero", "constant:<kappa>", "example1[:<b1>]", "thm2", "thm2-mirror", "symmetric")


def constant_potential(kappa: float, name: Optional[str] = None) -> WaltersPotential:
    tail = ConstantTail(kappa)
    return WaltersPotential(
        a_seq=SequenceSpec(2, (), tail), b_seq=SequenceSpec(1, (), tail),
        c_seq=SequenceSpec(2, (), tail), d_seq=SequenceSpec(1, (), tail),
        name=name or f"constant:{kappa:g}",
    )


def example1(b1: float = -1.0) -> WaltersPotential:
    """The symmetric example whose Gibbs states converge to (delta_0 + delta_1)/2."""
    if not b1 < 0:
        raise SpecValidationError(f"example1 needs b1 = d1 < 0, got {b1}", module="specs")
    return WaltersPotential(
        a_seq=SequenceSpec(2, (), GeometricTail(0.0, -4.0, 0.5)),
        b_seq=SequenceSpec(1, (b1,), GeometricTail(-2.0, 4.0, 0.5)),
        c_seq=SequenceSpec(2, (), GeometricTail(0.0, -9.0, 1.0 / 3.0)),
        d_seq=SequenceSpec(1, (b1,), GeometricTail(-1.5, 4.5, 1.0 / 3.0)),
        name="example1" if b1 == -1.0 else f"example1:{b1:g}",
    )


def _halving_run(prefix: tuple = ()) -> SequenceSpec:
    return SequenceSpec(2, prefix, GeometricTail(0.0, -4.0, 0.5))


def thm2() -> WaltersPotential:
    minus_one = ConstantTail(-1.0)
    return WaltersPotential(
        a_seq=_halving_run((-10.0,)),
        b_seq=SequenceSpec(1, (), minus_one),
        c_seq=_halving_run(),
        d_seq=SequenceSpec(1, (), minus_one),
        name="thm2",
    )


def symmetric() -> WaltersPotential:
    minus_one = ConstantTail(-1.0)
    return WaltersPotential(
        a_seq=_halving_run(), b_seq=SequenceSpec(1, (), minus_one),
        c_seq=_halving_run(), d_seq=SequenceSpec(1, (), minus_one),
        name="symmetric",
    )


def builtin(name: str) -> WaltersPotential:
    """
    Look up a built-in potential by name.

    Raises:
        SpecValidationError: For unknown names or bad parameters
    """
    base, _, param = name.partition(":")
    try:
        if base == "zero" and not param:
            return constant_potential(0.0, name="zero")
        if base == "constant" and param:
            return constant_potential(float(param))
        if base == "example1":
            return example1(float(param)) if param else example1()
        if base == "thm2" and not param:
            return thm2()
        if base == "thm2-mirror" and not param:
            mirror = thm2().mirrored()
            return WaltersPotential(mirror.a_seq, mirror.b_seq, mirror.c_seq, mirror.d_seq, name="thm2-mirror")
        if base == "symmetric" and not param:
            return symmetric()
    except ValueError as e:
        if isinstance(e, SpecValidationError):
            raise
        raise SpecValidationError(f"bad parameter in built-in spec {name!r}: {e}", module="specs")
    raise SpecValidationError(
        f"unknown built-in spec {name!r}; choose from {', '.join(BUILTIN_NAMES)}", module="specs"
    )


def load_spec_file(path: str) -> WaltersPotential:
    """
    Read a potential from a JSON spec file.

    Raises:
        SpecValidationError: If the file is missing, unparsable or malformed
    """
    spec_path = Path(path)
    try:
        data = json.loads(spec_path.read_text())
    except FileNotFoundError:
        raise SpecValidationError(f"spec file not found: {path}", module="specs")
    except json.JSONDecodeError as e:
        raise SpecValidationError(f"spec file {path} is not valid JSON: {e}", module="specs")
    if not isinstance(data, dict):
        raise SpecValidationError(f"spec file {path} must hold a JSON object", module="specs")
    try:
        potential = WaltersPotential.from_dict(data, name=str(data.get("name", spec_path.stem)))
    except SpecValidationError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as e:
        raise SpecValidationError(f"malformed spec file {path}: {e}", module="specs")
    for note in potential.notes:
        logger.warning(f"{path}: {note}")
    return potential


def load_potential(spec_path: Optional[str] = None, builtin_name: Optional[str] = None) -> WaltersPotential:
    """Resolve exactly one of a spec file or a built-in name."""
    if (spec_path is None) == (builtin_name is None):
        raise SpecValidationError("give exactly one of a spec file or a built-in name", module="specs")
    if spec_path is not None:
        return load_spec_file(spec_path)
    return builtin(builtin_name)
