"""Print the premium table (r = 0..3) for the default parameters."""

from largeclaim.experiments import run_table1

if __name__ == "__main__":
    print(run_table1(), end="")
