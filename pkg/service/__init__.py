# GME 추정 / 오라클 / 실험 서비스 패키지
