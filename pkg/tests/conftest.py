from hypothesis import strategies as st

from weihsim.term import ONE, TOP, ZERO, comp, diamond, join, letter, meet

LETTERS = st.sampled_from([letter(a) for a in "abc"])


def terms(max_leaves=8, pointed=False, meet_free=False):
    leaves = LETTERS | st.just(ONE)
    if not pointed:
        leaves = leaves | st.sampled_from([ZERO, TOP])

    def extend(children):
        ops = [st.builds(join, children, children), st.builds(comp, children, children),
               st.builds(diamond, children)]
        if not meet_free:
            ops.append(st.builds(meet, children, children))
        return st.one_of(ops)

    return st.recursive(leaves, extend, max_leaves=max_leaves)
