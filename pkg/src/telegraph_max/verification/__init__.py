"""Oracle layer: quadrature, goodness-of-fit statistics, Monte Carlo and
the check suites.  Import the submodules directly (``quadrature``,
``stats``, ``montecarlo``, ``checks``); the law layer depends on
``quadrature``, so this package stays import-light."""
