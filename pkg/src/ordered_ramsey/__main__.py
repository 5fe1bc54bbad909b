from ordered_ramsey.cli import main

main()
