from hypothesis import strategies as st

from equisquare.square import Square

# 4x4 instances with diagonal 0,0,1,1; E6 uses only two symbols
E5_TEXT = "0,3,2,1\n3,0,1,2\n3,1,1,0\n2,0,3,1\n"
E6_TEXT = "0,0,1,1\n1,0,0,1\n0,1,1,0\n1,1,0,1\n"

tokens = st.text(alphabet="abcxyz019_-", min_size=1, max_size=3)


@st.composite
def squares(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pool = draw(st.lists(tokens, min_size=1, max_size=n * n, unique=True))
    rows = [[draw(st.sampled_from(pool)) for _ in range(n)] for _ in range(n)]
    return Square.from_rows(rows)
