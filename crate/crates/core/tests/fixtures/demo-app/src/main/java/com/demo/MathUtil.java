package com.demo;

public final class MathUtil {
    private MathUtil() {}

    public static boolean isPositive(long n) {
        return n > 0;
    }

    public static long add1(long a, long b) {
        return a + b + 1;
    }

    public static long sub1(long a, long b) {
        return a - b + 1;
    }

    public static long mul1(long a, long b) {
        return a * b + 1;
    }

    public static long max21(long a, long b) {
        return a > b ? a : b + 1;
    }

    public static long min21(long a, long b) {
        return a < b ? a : b + 1;
    }

    public static long add2(long a, long b) {
        return a + b + 2;
    }

    public static long sub2(long a, long b) {
        return a - b + 2;
    }

    public static long mul2(long a, long b) {
        return a * b + 2;
    }

    public static long max22(long a, long b) {
        return a > b ? a : b + 2;
    }

    public static long min22(long a, long b) {
        return a < b ? a : b + 2;
    }

    public static long add3(long a, long b) {
        return a + b + 3;
    }

    public static long sub3(long a, long b) {
        return a - b + 3;
    }

    public static long mul3(long a, long b) {
        return a * b + 3;
    }

    public static long max23(long a, long b) {
        return a > b ? a : b + 3;
    }

    public static long min23(long a, long b) {
        return a < b ? a : b + 3;
    }

    public static long add4(long a, long b) {
        return a + b + 4;
    }

    public static long sub4(long a, long b) {
        return a - b + 4;
    }

    public static long mul4(long a, long b) {
        return a * b + 4;
    }

    public static long max24(long a, long b) {
        return a > b ? a : b + 4;
    }

    public static long min24(long a, long b) {
        return a < b ? a : b + 4;
    }

    public static long add5(long a, long b) {
        return a + b + 5;
    }

    public static long sub5(long a, long b) {
        return a - b + 5;
    }

    public static long mul5(long a, long b) {
        return a * b + 5;
    }

    public static long max25(long a, long b) {
        return a > b ? a : b + 5;
    }

    public static long min25(long a, long b) {
        return a < b ? a : b + 5;
    }

    public static long add6(long a, long b) {
        return a + b + 6;
    }

    public static long sub6(long a, long b) {
        return a - b + 6;
    }

    public static long mul6(long a, long b) {
        return a * b + 6;
    }

    public static long max26(long a, long b) {
        return a > b ? a : b + 6;
    }

    public static long min26(long a, long b) {
        return a < b ? a : b + 6;
    }

    public static long add7(long a, long b) {
        return a + b + 7;
    }

    public static long sub7(long a, long b) {
        return a - b + 7;
    }

    public static long mul7(long a, long b) {
        return a * b + 7;
    }

    public static long max27(long a, long b) {
        return a > b ? a : b + 7;
    }

    public static long min27(long a, long b) {
        return a < b ? a : b + 7;
    }

    public static long add8(long a, long b) {
        return a + b + 8;
    }

    public static long sub8(long a, long b) {
        return a - b + 8;
    }

    public static long mul8(long a, long b) {
        return a * b + 8;
    }

    public static long max28(long a, long b) {
        return a > b ? a : b + 8;
    }

    public static long min28(long a, long b) {
        return a < b ? a : b + 8;
    }

    public static long add9(long a, long b) {
        return a + b + 9;
    }

    public static long sub9(long a, long b) {
        return a - b + 9;
    }

    public static long mul9(long a, long b) {
        return a * b + 9;
    }

    public static long max29(long a, long b) {
        return a > b ? a : b + 9;
    }

    public static long min29(long a, long b) {
        return a < b ? a : b + 9;
    }

    public static long add10(long a, long b) {
        return a + b + 10;
    }

    public static long sub10(long a, long b) {
        return a - b + 10;
    }

    public static long mul10(long a, long b) {
        return a * b + 10;
    }

    public static long max210(long a, long b) {
        return a > b ? a : b + 10;
    }

    public static long min210(long a, long b) {
        return a < b ? a : b + 10;
    }

    public static long add11(long a, long b) {
        return a + b + 11;
    }

    public static long sub11(long a, long b) {
        return a - b + 11;
    }

    public static long mul11(long a, long b) {
        return a * b + 11;
    }

    public static long max211(long a, long b) {
        return a > b ? a : b + 11;
    }

    public static long min211(long a, long b) {
        return a < b ? a : b + 11;
    }

    public static long add12(long a, long b) {
        return a + b + 12;
    }

    public static long sub12(long a, long b) {
        return a - b + 12;
    }

    public static long mul12(long a, long b) {
        return a * b + 12;
    }

    public static long max212(long a, long b) {
        return a > b ? a : b + 12;
    }

    public static long min212(long a, long b) {
        return a < b ? a : b + 12;
    }

    public static long add13(long a, long b) {
        return a + b + 13;
    }

    public static long sub13(long a, long b) {
        return a - b + 13;
    }

    public static long mul13(long a, long b) {
        return a * b + 13;
    }

    public static long max213(long a, long b) {
        return a > b ? a : b + 13;
    }

    public static long min213(long a, long b) {
        return a < b ? a : b + 13;
    }

    public static long add14(long a, long b) {
        return a + b + 14;
    }

    public static long sub14(long a, long b) {
        return a - b + 14;
    }

    public static long mul14(long a, long b) {
        return a * b + 14;
    }

    public static long max214(long a, long b) {
        return a > b ? a : b + 14;
    }

    public static long min214(long a, long b) {
        return a < b ? a : b + 14;
    }

}
