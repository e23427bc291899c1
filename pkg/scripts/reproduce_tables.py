import sys

from influence_games.cli import reproduce_command

if __name__ == "__main__":
    sys.exit(reproduce_command())
