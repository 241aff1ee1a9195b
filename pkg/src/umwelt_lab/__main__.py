from umwelt_lab.cli import main

raise SystemExit(main())
