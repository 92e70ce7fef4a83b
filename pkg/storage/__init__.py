"""Хранение: модели предметной области и файловый ввод-вывод"""
