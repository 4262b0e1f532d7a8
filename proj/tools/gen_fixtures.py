#!/usr/bin/env python3
"""Regenerates the bundled desk-scale fixtures in data/fixtures/.

The numbers are synthetic: a latent capability per country and a latent
difficulty per product set export levels, with year trends (Chinese
accumulators grow fastest) and small disagreements between the exporter's
and the importer's declaration of the same flow. Output is deterministic.
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "fixtures"

EU = ["AUT", "BEL", "CZE", "DEU", "ESP", "FRA", "HUN", "ITA", "NLD", "POL", "PRT", "ROU", "SVK", "SWE"]
NON_EU = ["BRA", "CHE", "CHN", "GBR", "IND", "JPN", "KOR", "MEX", "TUR", "USA"]
COUNTRIES = sorted(EU + NON_EU)
YEARS = range(2015, 2023)

# Rough capability (0..1) and economic size (log scale).
CAPABILITY = {
    "AUT": 0.72, "BEL": 0.66, "BRA": 0.40, "CHE": 0.80, "CHN": 0.62, "CZE": 0.64, "DEU": 0.90, "ESP": 0.58,
    "FRA": 0.74, "GBR": 0.76, "HUN": 0.55, "IND": 0.38, "ITA": 0.70, "JPN": 0.92, "KOR": 0.84, "MEX": 0.50,
    "NLD": 0.68, "POL": 0.52, "PRT": 0.45, "ROU": 0.42, "SVK": 0.50, "SWE": 0.78, "TUR": 0.46, "USA": 0.86,
}
SIZE = {
    "AUT": 0.4, "BEL": 0.5, "BRA": 0.8, "CHE": 0.5, "CHN": 1.6, "CZE": 0.4, "DEU": 1.3, "ESP": 0.8,
    "FRA": 1.0, "GBR": 0.9, "HUN": 0.3, "IND": 0.9, "ITA": 0.9, "JPN": 1.2, "KOR": 1.0, "MEX": 0.9,
    "NLD": 0.6, "POL": 0.6, "PRT": 0.2, "ROU": 0.3, "SVK": 0.3, "SWE": 0.5, "TUR": 0.6, "USA": 1.4,
}

# Non-automotive HS2012 codes so the global complexity run has a broader basket.
OTHER_PRODUCTS = [
    "010121", "030211", "090111", "100199", "220830", "260111", "271019", "300490", "392690", "440710",
    "520100", "610910", "620342", "640399", "720851", "732690", "841810", "847130", "851712", "854231",
    "880240", "901890", "940360", "950300",
]
# Products where the given exporters gain ground quickly over the period.
BOOMS = {"850760": {"CHN": 0.28, "KOR": 0.12, "POL": 0.10, "HUN": 0.10}, "870390": {"CHN": 0.20, "DEU": 0.06}}


def catalog_products():
    doc = json.loads((ROOT / "data" / "catalog" / "automotive.json").read_text())
    return sorted(p["code"] for p in doc["products"] if p["vintage"] == 2012)


def trade_rows(rng):
    products = catalog_products() + OTHER_PRODUCTS
    difficulty = {p: rng.uniform(0.2, 0.95) for p in products}
    rows = []
    for exporter in COUNTRIES:
        for product in products:
            gap = CAPABILITY[exporter] - difficulty[product]
            base = 6.0 * gap + SIZE[exporter] + rng.gauss(0.0, 0.8)
            if base < -2.5:
                continue  # does not export this product at all
            partners = rng.sample([c for c in COUNTRIES if c != exporter], 3)
            weights = [rng.uniform(0.5, 1.5) for _ in partners]
            for year in YEARS:
                t = year - YEARS[0]
                growth = 0.03 + BOOMS.get(product, {}).get(exporter, 0.0)
                level = math.exp(base + growth * t + rng.gauss(0.0, 0.1)) * 1e6
                for partner, w in zip(partners, weights):
                    value = level * w
                    declared_export = value * math.exp(rng.gauss(0.0, 0.03))
                    declared_import = value * 1.05 * math.exp(rng.gauss(0.0, 0.03))  # CIF margin
                    side = rng.random()
                    if side > 0.1:
                        rows.append((year, exporter, partner, product, "export", declared_export))
                    if side < 0.9:
                        rows.append((year, partner, exporter, product, "import", declared_import))
    rows.sort()
    return rows


def write_trade(rng):
    path = OUT / "trade_hs2012.csv"
    with path.open("w") as f:
        f.write("# synthetic bilateral flows, HS2012, USD\n")
        f.write("year,reporter,partner,product,direction,value_usd\n")
        for year, rep, par, prod, direction, value in trade_rows(rng):
            f.write(f"{year},{rep},{par},{prod},{direction},{value:.2f}\n")


IO_SECTORS = ["C20", "C22", "C24", "C25", "C26", "C27", "C28", "C29", "G", "H49", "M"]


def write_io(rng):
    path = OUT / "icio_c29.csv"
    affinity = {(c, s): rng.uniform(0.2, 1.0) for c in COUNTRIES for s in IO_SECTORS}
    with path.open("w") as f:
        f.write("# synthetic intermediate-use block: inputs into motor vehicles (C29), USD million\n")
        f.write("year,origin_country,origin_sector,dest_country,dest_sector,value_usd\n")
        for year in range(2016, 2021):
            t = year - 2016
            for dest in EU:
                for origin in COUNTRIES:
                    for sector in IO_SECTORS:
                        home = 8.0 if origin == dest else (2.5 if origin in EU else 1.0)
                        if origin == "CHN":
                            home *= 1.0 + 0.15 * t
                        scale = (3.0 if sector == "C29" else 1.0) * SIZE[dest] * SIZE[origin]
                        value = home * scale * affinity[(origin, sector)] * math.exp(rng.gauss(0.0, 0.1))
                        if value < 0.15:
                            continue
                        f.write(f"{year},{origin},{sector},{dest},C29,{value:.3f}\n")


CONFIG = """\
# Desk-scale pipeline over the bundled synthetic fixtures.
trade = trade_hs2012.csv
trade_vintage = 2012
reconciliation = importer_priority
catalog = ../catalog/automotive.json
concordance = ../catalog/concordance.csv
region = ../regions/eu27.txt
io = icio_c29.csv

years = 2015-2022
train_year = 2015
base_year = 2021
horizon = 5
seed = 42
accumulator_products = 850760

io_sector = C29
io_threshold = 0.05
growth_start = 2015
growth_end = 2022
vulnerability_year = 2021
out = forge-out
"""


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_trade(random.Random(20240611))
    write_io(random.Random(7))
    (OUT / "pipeline.conf").write_text(CONFIG)


if __name__ == "__main__":
    main()
