from core_revealer.cli import main

main()
