"""Deterministic synthetic golf-course dataset generator.

Reproduces the shape of the evaluation spreadsheet: ten columns, short
categorical vocabularies, and a handful of values that deliberately occur
in more than one column ("Marion" is both a city and a county, "Moderate"
both a price and a difficulty) so ambiguity handling can be exercised.
"""

from __future__ import annotations

import csv
import io
import random

__all__ = ["GOLF_HEADER", "generate_dataset"]

GOLF_HEADER = [
    "Address",
    "City",
    "County",
    "Phone",
    "Course Type",
    "Price",
    "Holes",
    "Difficulty",
    "Terrain",
    "Web page",
]

_CITIES = [
    "Anderson", "Greenfield", "Coars", "Skellyville", "Greenwood", "Marion",
    "Hickory", "Lafayette", "Carmel", "Brownsburg", "Clovesdale",
    "Kendallville", "Lebanon", "Hamilton", "Franklin", "Mooresville",
    "Ellettswood", "Clayton",
]
_COUNTIES = [
    "Madison", "Hancock", "Hamilton", "Skelly", "Johnson", "Marion",
    "Hendricks", "Putnam", "Holtz", "Boone", "Jefferson", "Morgan",
]
_STREETS = [
    "Northshore Blvd", "Club House Dr", "E. 22nd St.", "N. Riley Hwy",
    "Greenack Road", "W. 19th St.", "E. 131st St.", "Kessler Blvd",
    "Drakeshire Pkwy", "E. Feltz Rd", "Cobblestone Lane", "Cold Spring Rd",
    "Country Club Rd", "Running Tree Lane", "S. Franklin Rd", "Straw Road",
]
_COURSE_TYPES = ["Public", "Private", "Open to public"]
_PRICES = ["Low", "Moderate", "Premium"]
_HOLES = ["9", "18", "36"]
_DIFFICULTIES = ["Easy", "Moderate", "Hard", "Executive"]
_TERRAINS = ["Varied", "Flat", "Rolling", "Hilly"]
_AREA_CODES = ["317", "765", "219", "574", "755"]
_WEB_PAGE = "http://www.holegolf.com/show"


def generate_dataset(seed: int, n_rows: int) -> str:
    """Produce CSV text with `n_rows` data rows; identical bytes per seed."""
    if n_rows < 1:
        raise ValueError("n_rows must be at least 1")
    rng = random.Random(seed)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(GOLF_HEADER)
    for _ in range(n_rows):
        writer.writerow(
            [
                f"{rng.randint(100, 9999)} {rng.choice(_STREETS)}",
                rng.choice(_CITIES),
                rng.choice(_COUNTIES),
                f"{rng.choice(_AREA_CODES)}-{rng.randint(100, 999)}-{rng.randint(1000, 9999)}",
                rng.choices(_COURSE_TYPES, weights=[6, 2, 2])[0],
                rng.choice(_PRICES),
                rng.choices(_HOLES, weights=[3, 6, 1])[0],
                rng.choice(_DIFFICULTIES),
                rng.choice(_TERRAINS),
                _WEB_PAGE,
            ]
        )
    return out.getvalue()
