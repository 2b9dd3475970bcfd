import pytest

from tileshift.errors import BudgetExceeded, NoMovesAvailable, Unsolvable
from tileshift.puzzle import ColorScheme, Puzzle, apply_move, apply_moves, enumerate_moves, shuffle
from tileshift.solver import Hint, hint, mismatch_lower_bound, solve_bfs, solve_idastar
from tileshift.space import enumerate_space
from tileshift.surface import board_from_permutations


class TestSolveBfs:
    def test_already_solved(self, cross):
        sol = solve_bfs(cross, cross.home)
        assert sol.moves == []
        assert sol.optimal

    def test_single_move_inverse(self, cross):
        mv = enumerate_moves(cross.board)[0]
        start = apply_move(cross.home, mv, cross.board)
        sol = solve_bfs(cross, start)
        assert len(sol.moves) == 1
        assert apply_moves(start, sol.moves, cross.board) == cross.home

    def test_lengths_match_space_depths(self, chroma3):
        graph = enumerate_space(chroma3)
        for seed in range(25):
            start, _ = shuffle(chroma3, 20, seed=42 + seed)
            sol = solve_bfs(chroma3, start)
            depth = int(graph.depths[graph.id_of(graph.codec.encode(start))])
            assert len(sol.moves) == depth
            assert apply_moves(start, sol.moves, chroma3.board) == chroma3.home

    def test_deterministic(self, cross):
        start, _ = shuffle(cross, 15, seed=8)
        assert solve_bfs(cross, start).moves == solve_bfs(cross, start).moves

    def test_unsolvable_on_moveless_board(self):
        # two self-pasted squares: no movable cycle, so (1,0) can never reach (0,1)
        moveless = board_from_permutations(2, [0, 1], [0, 1])
        stuck = Puzzle(board=moveless, scheme=ColorScheme.from_counts([1, 1]), home=(0, 1))
        with pytest.raises(Unsolvable):
            solve_bfs(stuck, (1, 0))

    def test_budget_exceeded(self, chroma3):
        start, _ = shuffle(chroma3, 50, seed=4)
        with pytest.raises(BudgetExceeded):
            solve_bfs(chroma3, start, budget=5)


class TestSolveIdastar:
    def test_heuristic_zero_at_home(self, cross):
        h = mismatch_lower_bound(cross)
        assert h(cross.home) == 0

    def test_heuristic_admissible_on_cross_space(self, cross):
        graph = enumerate_space(cross)
        h = mismatch_lower_bound(cross)
        for vid in range(graph.num_vertices):
            assert h(graph.configuration(vid)) <= int(graph.depths[vid])

    def test_matches_bfs_lengths(self, cross):
        for seed in range(30):
            start, _ = shuffle(cross, 1 + seed % 14, seed=seed)
            a = solve_bfs(cross, start)
            b = solve_idastar(cross, start)
            assert len(a.moves) == len(b.moves)
            assert apply_moves(start, b.moves, cross.board) == cross.home
            assert b.optimal

    def test_unsolvable(self):
        moveless = board_from_permutations(2, [0, 1], [0, 1])
        stuck = Puzzle(board=moveless, scheme=ColorScheme.from_counts([1, 1]), home=(0, 1))
        with pytest.raises(Unsolvable):
            solve_idastar(stuck, (1, 0))

    def test_node_budget(self, chroma3):
        start, _ = shuffle(chroma3, 50, seed=11)
        with pytest.raises(BudgetExceeded):
            solve_idastar(chroma3, start, node_budget=3)


class TestSolutionBound:
    def test_length_at_most_shuffle_count(self, cross, chroma3):
        for puzzle in (cross, chroma3):
            for seed in range(10):
                m = 1 + seed
                start, _ = shuffle(puzzle, m, seed=seed)
                assert len(solve_bfs(puzzle, start).moves) <= m


class TestHint:
    def test_solved_returns_none(self, cross):
        assert hint(cross, cross.home) is None

    def test_optimal_hint_reduces_distance(self, cross):
        graph = enumerate_space(cross)
        start, _ = shuffle(cross, 12, seed=2)
        found = hint(cross, start)
        assert isinstance(found, Hint) and found.optimal
        after = apply_move(start, found.move, cross.board)
        d0 = int(graph.depths[graph.id_of(graph.codec.encode(start))])
        d1 = int(graph.depths[graph.id_of(graph.codec.encode(after))])
        assert d1 == d0 - 1

    def test_greedy_fallback_flagged(self, grid5_hole):
        start, _ = shuffle(grid5_hole, 40, seed=1)
        found = hint(grid5_hole, start, budget=50)
        assert not found.optimal
        assert found.move in enumerate_moves(grid5_hole.board)

    def test_strict_budget_raises(self, grid5_hole):
        start, _ = shuffle(grid5_hole, 40, seed=1)
        with pytest.raises(BudgetExceeded):
            hint(grid5_hole, start, budget=50, allow_greedy=False)

    def test_no_moves(self):
        moveless = board_from_permutations(2, [0, 1], [0, 1])
        puzzle = Puzzle(board=moveless, scheme=ColorScheme.from_counts([1, 1]), home=(0, 1))
        with pytest.raises(NoMovesAvailable):
            hint(puzzle, (1, 0))

    def test_unsolvable_propagates(self):
        # two disjoint 2-square strips: each swap stays inside its strip, so
        # colors can never migrate between {0,1} and {2,3}
        board = board_from_permutations(4, [1, 0, 3, 2], [0, 1, 2, 3])
        puzzle = Puzzle(board=board, scheme=ColorScheme.from_counts([1, 1, 1, 1]), home=(0, 1, 2, 3))
        start = (2, 3, 0, 1)
        with pytest.raises(Unsolvable):
            solve_bfs(puzzle, start)
        with pytest.raises(Unsolvable):
            hint(puzzle, start)
