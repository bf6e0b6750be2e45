from boxconvex.cli import main

raise SystemExit(main())
