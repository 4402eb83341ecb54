from fracmks.cli import main

raise SystemExit(main())
