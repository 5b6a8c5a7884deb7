# 상태벡터 시뮬레이션 패키지
