"""
Django Management Command: clear_critical_cache

Removes every cached critical point set. Entries are keyed by the canonical
spec and the seed, so stale entries only appear after changing the solver
settings (tolerances, path steps) without bumping EULER_CACHE_VERSION.

Usage:
    euler clear_critical_cache
"""

from django.core.management.base import BaseCommand

from critpoints.cache_utils import clear_critical_cache


class Command(BaseCommand):
    help = "Clear the critical point cache"
    requires_system_checks = []

    def handle(self, *args, **options):
        cleared = clear_critical_cache()
        self.stdout.write(self.style.SUCCESS(f"Total entries cleared: {cleared}"))
