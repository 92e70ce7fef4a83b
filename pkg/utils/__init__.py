"""Утилиты: ошибки, логирование, валидация, повтор запросов, шаблоны вывода"""
