"""
Main entry point for the Bateman-Horn toolkit.

Runs the CLI and releases the sieve worker pool when interrupted.
"""

import signal
import sys

from cli.main_cli import cli_app
from cli.main_cli import main as cli_main


def signal_handler(signum, frame):
    """Handle shutdown signals gracefully."""
    signal_names = {signal.SIGINT: 'SIGINT', signal.SIGTERM: 'SIGTERM'}
    signal_name = signal_names.get(signum, f'Signal {signum}')

    print(f"\nReceived {signal_name}, shutting down...", file=sys.stderr)

    if cli_app.app is not None:
        cli_app.app.shutdown()

    sys.exit(1)


def main() -> int:
    """Main entry point for the CLI application."""
    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)

    try:
        return cli_main(standalone_mode=False)
    except KeyboardInterrupt:
        print("\nOperation cancelled by user.", file=sys.stderr)
        if cli_app.app is not None:
            cli_app.app.shutdown()
        return 1


if __name__ == "__main__":
    sys.exit(main())
