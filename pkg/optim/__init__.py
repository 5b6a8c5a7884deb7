# 최적화 패키지
