from __future__ import annotations

from typing import get_args

from aniso_swarm.coeffs.models import Family

FAMILIES = {cls.model_fields["family"].default: cls for cls in get_args(get_args(Family)[0])}


def dispatch_family(name: str) -> type:
    """Model class for a family tag such as ``exp_shifted``."""
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"Family {name} not found, available families: {sorted(FAMILIES)}") from None


def family_parameters(name: str) -> list[str]:
    return [field for field in dispatch_family(name).model_fields if field != "family"]
