from hypothesis import HealthCheck, settings

# numeric examples are cheap but first-call numpy dispatch can spike; wall
# clock is not what these properties test
settings.register_profile(
    "zernkit", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("zernkit")
