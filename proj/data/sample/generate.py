# Copyright 2026 The Syndro Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the sample emergency-department style dataset.

    python3 generate.py

Writes schema.json, instances.csv, influenza_targets.csv and influenza.syn.
Influenza visits (ICD J10/J11) follow a winter season; the weekly target is a
noisy multiple of them.
"""

import csv
import datetime as dt
import json
import math
import random

SEED = 20190101
FIRST = dt.date(2019, 1, 7)  # a Monday, start of ISO week 2019-W02
WEEKS = 104
PER_WEEK = 180

SCHEMA = [
    ("mts_presentation", "discrete", "diagnosis"),
    ("mts_indicator", "discrete", "diagnosis"),
    ("icd_full", "discrete", "diagnosis"),
    ("icd", "discrete", "diagnosis"),
    ("gender", "discrete", "demographic"),
    ("age", "discrete", "demographic"),
    ("bp_systolic", "numeric", "vital"),
    ("bp_diastolic", "numeric", "vital"),
    ("temperature", "numeric", "vital"),
    ("respiration_rate", "numeric", "vital"),
    ("pulse", "numeric", "vital"),
    ("oxygen_saturation", "numeric", "vital"),
    ("isolation", "discrete", "contextual"),
    ("transport", "discrete", "contextual"),
    ("disposition", "discrete", "contextual"),
]

BACKGROUND_ICD = ["S00", "S52", "S82", "R10", "R07", "I10", "K35", "N39", "J06", "J18", "A09", "Z96", "T14"]
PRESENTATIONS = ["back pain", "chest pain", "abdominal pain", "limb problems", "shortness of breath",
                 "unwell adult", "headache", "falls", "diarrhoea and vomiting"]
INDICATORS = ["pain", "hot", "very hot", "acute onset", "pleuritic pain", "new neurological deficit",
              "unable to talk in sentences", "known immunosuppression"]
AGES = ["0-4", "5-14", "15-24", "25-34", "35-44", "45-54", "55-64", "65-74", "75+"]


def season(week):
    """Relative influenza activity, peaking around ISO week 7 of each year."""
    phase = (week + 1 - 7) % 52
    return math.exp(-((min(phase, 52 - phase)) ** 2) / 18.0)


def maybe(rng, rate, value):
    return "" if rng.random() < rate else value


def vitals(rng, flu):
    temp = rng.gauss(38.9 if flu else 36.9, 0.5)
    return {
        "bp_systolic": maybe(rng, 0.57, f"{rng.gauss(132, 18):.0f}"),
        "bp_diastolic": maybe(rng, 0.57, f"{rng.gauss(80, 11):.0f}"),
        "temperature": maybe(rng, 0.59, f"{temp:.1f}"),
        "respiration_rate": maybe(rng, 0.60, f"{rng.gauss(22 if flu else 16, 3):.0f}"),
        "pulse": maybe(rng, 0.92, f"{rng.gauss(96 if flu else 80, 12):.0f}"),
        "oxygen_saturation": maybe(rng, 0.57, f"{min(100, rng.gauss(94 if flu else 97, 2)):.0f}"),
    }


def main():
    rng = random.Random(SEED)
    rows = []
    flu_by_week = []
    for w in range(WEEKS):
        monday = FIRST + dt.timedelta(weeks=w)
        n_flu = int(round(25 * season(w) + rng.random() * 2))
        flu_by_week.append(n_flu)
        for i in range(PER_WEEK + n_flu):
            flu = i < n_flu
            date = monday + dt.timedelta(days=rng.randrange(7))
            if flu:
                short = rng.choice(["J10", "J11", "J11"])
                full = short + "." + rng.choice(["0", "1", "8"])
                presentation = rng.choice(["shortness of breath", "unwell adult", "headache"])
                indicator = rng.choice(["hot", "very hot", "pleuritic pain"])
            else:
                short = rng.choice(BACKGROUND_ICD)
                full = short + "." + str(rng.randrange(10))
                presentation = rng.choice(PRESENTATIONS)
                indicator = rng.choice(INDICATORS)
            has_icd = flu or rng.random() > 0.65
            row = {
                "date": date.isoformat(),
                "mts_presentation": presentation,
                "mts_indicator": maybe(rng, 0.05, indicator),
                "icd_full": full if has_icd else "",
                "icd": short if has_icd else "",
                "gender": rng.choice(["male", "female", "female", "male", "other"] if rng.random() < 0.01
                                     else ["male", "female"]),
                "age": rng.choice(AGES),
                "isolation": maybe(rng, 0.02, rng.choice(["NO", "NO", "NO", "1", "2", "RISO"])),
                "transport": maybe(rng, 0.60, rng.choice(["1", "2", "3", "4", "OTH"])),
                "disposition": maybe(rng, 0.90, rng.choice(["1", "2", "3", "5", "OTH"])),
            }
            row.update(vitals(rng, flu))
            rows.append(row)
    rows.sort(key=lambda r: r["date"])

    with open("schema.json", "w") as f:
        json.dump([{"name": n, "kind": k, "category": c} for n, k, c in SCHEMA], f, indent=2)
        f.write("\n")
    with open("instances.csv", "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=["date"] + [n for n, _, _ in SCHEMA], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    with open("influenza_targets.csv", "w", newline="") as f:
        out = csv.writer(f, lineterminator="\n")
        out.writerow(["bucket", "count"])
        for w, n in enumerate(flu_by_week):
            year, week, _ = (FIRST + dt.timedelta(weeks=w)).isocalendar()
            reported = max(0, int(round(n * 12 + rng.gauss(0, 8))))
            out.writerow([f"{year}-W{week:02d}", reported])
    with open("influenza.syn", "w") as f:
        f.write('icd = "J10" OR icd = "J11"\n')


if __name__ == "__main__":
    main()
