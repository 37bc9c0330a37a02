def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: runs a full verification on a rank-two lattice')
