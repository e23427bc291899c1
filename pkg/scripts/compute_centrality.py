import sys

from influence_games.cli import compute_command

if __name__ == "__main__":
    sys.exit(compute_command())
