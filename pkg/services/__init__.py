"""Сервисы конвейера EICV: лексиконы, текст, источник знаний, скоринг, оценка"""
