"""Regenerates the synthetic menopause-style sample in this directory.

Status 1 is natural onset, status 2 is operative onset, 0 is no onset by the
age at interview. Ages are recorded to one decimal.
"""
import csv
import random

rng = random.Random(20240601)

with open("menopause_scheme.csv", "w", newline="") as f:
    f.write("# age cells: (25,30] then yearly up to 55\n")
    f.write("lower,upper,representative,closure\n")
    f.write("25,30,27.5,oc\n")
    for a in range(30, 55):
        f.write(f"{a},{a + 1},{a + 0.5},oc\n")

with open("menopause.csv", "w", newline="") as f:
    out = csv.writer(f, lineterminator="\n")
    out.writerow(["time", "status"])
    for _ in range(2000):
        age = round(rng.uniform(25.1, 55.0), 1)
        cause = 1 if rng.random() < 0.8 else 2
        onset = rng.gauss(50.0, 4.0) if cause == 1 else rng.gauss(44.0, 6.0)
        out.writerow([age, cause if onset <= age else 0])
