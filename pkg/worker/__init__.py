# 워커 패키지
