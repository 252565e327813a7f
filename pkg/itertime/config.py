from fractions import Fraction
from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Tunable conventions. Override with ITERTIME_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="ITERTIME_", extra="ignore")

    log_level: str = "WARNING"

    plupart_threshold: float = 0.66
    certains_threshold: float = 0.33
    rarement_threshold: float = 0.15

    density_souvent: float = 0.75
    density_parfois: float = 0.25
    density_rarement: float = 0.1

    # minutes from midnight; nuit runs past the next midnight
    day_parts: dict[str, tuple[int, int]] = {
        "matin": (360, 720),
        "apres-midi": (720, 1080),
        "soir": (1080, 1380),
        "nuit": (1380, 1800),
    }
    season_starts: dict[str, tuple[int, int]] = {
        "printemps": (3, 21),
        "ete": (6, 21),
        "automne": (9, 21),
        "hiver": (12, 21),
    }
    tense_map: dict[str, tuple[str, str]] = {
        "passe_simple": ("aoristique", "passe"),
        "imparfait": ("inaccompli", "passe"),
        "passe_compose": ("aoristique", "passe"),
        "plus_que_parfait": ("accompli", "passe"),
        "present": ("inaccompli", "present"),
        "futur": ("aoristique", "futur"),
    }

    def threshold(self, name: str) -> Fraction:
        return Fraction(str(getattr(self, f"{name}_threshold")))

    def density(self, name: str) -> float:
        return getattr(self, f"density_{name}")


@lru_cache
def get_settings() -> Settings:
    return Settings()
