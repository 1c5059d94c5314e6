# orbifold_example.py

import sys
import orbifold

if __name__ == '__main__':

    #index = 3
    index = int(sys.argv[1])                          # convergent index of sqrt(2) - 1
    theta = orbifold.Irrational(cf=[0], period=[2])   # sqrt(2) - 1
    pipe = orbifold.prepare(theta, index=index)       # p/q, four squares, (a,b,gamma), lattices
    for cert in orbifold.certifyAll(pipe):
        print(cert.claim, cert.passed)                # Print every certificate
