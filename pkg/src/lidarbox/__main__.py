from lidarbox.cli.interface import main

main()
