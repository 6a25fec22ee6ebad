from django.apps import AppConfig


class RadixRationalConfig(AppConfig):
    name = 'radixrational'
    verbose_name = 'Radix-rational sequence asymptotics'
