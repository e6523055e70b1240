"""Print the Ekedahl-Oort strata tables for n = 2..N as TSV."""
import argparse

from dlab.strata import strata_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    print("n\trho\tcodim\tsupersingular\tpolygon")
    for n in range(2, args.max_n + 1):
        for r in strata_table(n):
            print(f"{n}\t{r.rho}\t{r.codim}\t{str(r.supersingular).lower()}\t{r.polygon.format()}")


if __name__ == "__main__":
    main()
