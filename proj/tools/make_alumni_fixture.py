#!/usr/bin/env python3
"""Writes tests/data/alumni_like.csv.

A synthetic survey-shaped table: 14 numeric columns and 9 nominal ones whose
one-hot expansion gives 104 features. It is NOT real alumni data; values and
the label are drawn from a made-up model so that the label is learnable but
noisy and unbalanced (about 30% "yes").
"""
import argparse
import csv
from pathlib import Path

import numpy as np

NOMINAL = {
    "faculty": ["Engineering", "Medicine", "Law", "Economics", "Architecture", "Education",
                "Sciences", "Arts, Humanities", "Nursing", "Agronomy", "Psychology", "Communication"],
    "program": [f"P{k:02d}" for k in range(30)],
    "region": ["North", "South", "East", "West", "Centre", "Coast", "Highlands", "Islands",
               "Capital", "Valley", "Plains", "Border", "Delta", "Lakes", "Abroad"],
    "sector": ["Public", "Finance", "Health", "Education", "Manufacturing", "Retail", "Tech",
               "Energy", "Mining", "Agriculture", "Transport", "NGO", "Consulting", "Self-employed"],
    "contract": ["permanent", "fixed-term", "freelance", "none"],
    "company_size": ["1-9", "10-49", "50-249", "250-999", "1000+"],
    "gender": ["F", "M", "other"],
    "degree_level": ["bachelor", "specialization", "master", "doctorate"],
    "job_level": ["junior", "mid", "senior"],
}
NUMERIC = ["age", "years_since_grad", "gpa", "salary_k", "hours_week", "n_jobs", "commute_km",
           "credits", "internships", "languages", "training_hours", "team_size", "promotions",
           "survey_score"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=20240817)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests/data/alumni_like.csv")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    n = args.rows

    years = rng.integers(0, 16, n)
    cols = {
        "age": 22 + years + rng.integers(0, 8, n),
        "years_since_grad": years,
        "gpa": np.round(np.clip(rng.normal(3.4, 0.4, n), 2.0, 5.0), 2),
        "salary_k": np.round(np.exp(rng.normal(3.4 + 0.05 * years, 0.4)), 1),
        "hours_week": np.round(np.clip(rng.normal(44, 8, n), 10, 80)),
        "n_jobs": rng.poisson(1.5 + 0.2 * years),
        "commute_km": np.round(rng.exponential(12, n), 1),
        "credits": rng.integers(150, 220, n),
        "internships": rng.poisson(1.0, n),
        "languages": 1 + rng.poisson(0.6, n),
        "training_hours": np.round(rng.gamma(2.0, 20.0, n)),
        "team_size": rng.integers(1, 60, n),
        "promotions": rng.poisson(0.3 * years),
        "survey_score": rng.integers(1, 11, n),
    }
    nominal = {}
    effects = {}
    for name, cats in NOMINAL.items():
        weights = rng.dirichlet(np.full(len(cats), 3.0))
        nominal[name] = rng.choice(len(cats), n, p=weights)
        effects[name] = rng.normal(0, 0.5, len(cats))
    # Every category appears at least once.
    for name, cats in NOMINAL.items():
        nominal[name][: len(cats)] = rng.permutation(len(cats))

    def z(v):
        v = np.asarray(v, dtype=float)
        return (v - v.mean()) / v.std()

    latent = (0.9 * z(cols["salary_k"]) + 0.6 * z(cols["survey_score"]) - 0.4 * z(cols["hours_week"])
              + 0.3 * z(cols["promotions"]) - 0.3 * z(cols["commute_km"]) + 0.2 * z(cols["gpa"])
              + sum(effects[k][nominal[k]] for k in NOMINAL) + rng.normal(0, 0.8, n))
    label = np.where(latent > np.quantile(latent, 0.7), "yes", "no")

    header = ["age", "faculty", "years_since_grad", "program", "gpa", "region", "salary_k", "sector",
              "hours_week", "contract", "n_jobs", "company_size", "commute_km", "gender", "credits",
              "degree_level", "internships", "job_level", "languages", "training_hours", "team_size",
              "promotions", "survey_score", "satisfied"]
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for i in range(n):
            row = []
            for h in header:
                if h == "satisfied":
                    row.append(label[i])
                elif h in NOMINAL:
                    row.append(NOMINAL[h][nominal[h][i]])
                else:
                    v = cols[h][i]
                    row.append(f"{v:g}" if isinstance(v, float) else str(v))
            w.writerow(row)
    width = len(NUMERIC) + sum(len(c) for c in NOMINAL.values())
    print(f"wrote {n} rows, {width} encoded features, {np.mean(label == 'yes'):.3f} positive -> {args.out}")


if __name__ == "__main__":
    main()
