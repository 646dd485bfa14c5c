from typing import Dict

from pydantic import BaseModel, ConfigDict, Field


class SimulationProfile(BaseModel):
    """Dimensiones y repeticiones de un perfil de simulación con nombre."""
    model_config = ConfigDict(frozen=True)

    name: str
    k: int = Field(ge=1)
    entities: int = Field(ge=2)
    periods: int = Field(ge=2)
    replications: int = Field(ge=1)
    dml_repetitions: int = Field(ge=1)
    seed: int


PROFILES: Dict[str, SimulationProfile] = {
    "desk": SimulationProfile(
        name="desk", k=50, entities=100, periods=7, replications=100, dml_repetitions=11, seed=20240101
    ),
    "paper": SimulationProfile(
        name="paper", k=947, entities=290, periods=7, replications=100, dml_repetitions=51, seed=20240101
    ),
}

# Nombres alternativos aceptados por --profile
PROFILE_ALIASES: Dict[str, str] = {"full": "paper"}

# Repeticiones DML por defecto en estimaciones sobre datos reales
ESTIMATE_DML_REPETITIONS = 51


def get_profile(name: str) -> SimulationProfile:
    try:
        return PROFILES[PROFILE_ALIASES.get(name, name)]
    except KeyError:
        raise ValueError(f"Unknown profile '{name}'; expected one of {sorted([*PROFILES, *PROFILE_ALIASES])}")
