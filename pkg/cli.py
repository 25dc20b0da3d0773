from brats_toolkit.cli import cli


if __name__ == "__main__":
    exit(cli())
