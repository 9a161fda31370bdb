"""The action of H on cosets: orbits, intersection sets and quasi-normalizers"""
