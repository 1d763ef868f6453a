from __future__ import annotations

import datetime as dt

from pydantic import BaseModel, ConfigDict


class PseudoClique(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    members: list[str]
    density: float
    total_weight: int
    seed_day: dt.date
    day_span: tuple[dt.date, dt.date]

    @property
    def size(self) -> int:
        return len(self.members)

    def to_record(self) -> dict:
        return {
            "app_id": self.app_id,
            "size": self.size,
            "members": self.members,
            "density": self.density,
            "total_weight": self.total_weight,
            "seed_day": self.seed_day.isoformat(),
            "day_span": [self.day_span[0].isoformat(), self.day_span[1].isoformat()],
        }
