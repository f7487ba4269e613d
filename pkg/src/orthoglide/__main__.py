from orthoglide.cli import main

main()
