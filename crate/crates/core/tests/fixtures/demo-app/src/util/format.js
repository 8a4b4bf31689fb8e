export function clamp(v, lo, hi) {
  return v < lo ? lo : v > hi ? hi : v;
}

export function add1(a, b) {
  return a + b + 1;
}

export function sub1(a, b) {
  return a - b + 1;
}

export function mul1(a, b) {
  return a * b + 1;
}

export function max21(a, b) {
  return a > b ? a : b + 1;
}

export function min21(a, b) {
  return a < b ? a : b + 1;
}

export function add2(a, b) {
  return a + b + 2;
}

export function sub2(a, b) {
  return a - b + 2;
}

export function mul2(a, b) {
  return a * b + 2;
}

export function max22(a, b) {
  return a > b ? a : b + 2;
}

export function min22(a, b) {
  return a < b ? a : b + 2;
}

export function add3(a, b) {
  return a + b + 3;
}

export function sub3(a, b) {
  return a - b + 3;
}

export function mul3(a, b) {
  return a * b + 3;
}

export function max23(a, b) {
  return a > b ? a : b + 3;
}

export function min23(a, b) {
  return a < b ? a : b + 3;
}

export function add4(a, b) {
  return a + b + 4;
}

export function sub4(a, b) {
  return a - b + 4;
}

export function mul4(a, b) {
  return a * b + 4;
}

export function max24(a, b) {
  return a > b ? a : b + 4;
}

export function min24(a, b) {
  return a < b ? a : b + 4;
}

export function add5(a, b) {
  return a + b + 5;
}

export function sub5(a, b) {
  return a - b + 5;
}

export function mul5(a, b) {
  return a * b + 5;
}

export function max25(a, b) {
  return a > b ? a : b + 5;
}

export function min25(a, b) {
  return a < b ? a : b + 5;
}

export function add6(a, b) {
  return a + b + 6;
}

export function sub6(a, b) {
  return a - b + 6;
}

export function mul6(a, b) {
  return a * b + 6;
}

export function max26(a, b) {
  return a > b ? a : b + 6;
}

export function min26(a, b) {
  return a < b ? a : b + 6;
}

export function add7(a, b) {
  return a + b + 7;
}

export function sub7(a, b) {
  return a - b + 7;
}

export function mul7(a, b) {
  return a * b + 7;
}

export function max27(a, b) {
  return a > b ? a : b + 7;
}

export function min27(a, b) {
  return a < b ? a : b + 7;
}

export function add8(a, b) {
  return a + b + 8;
}

export function sub8(a, b) {
  return a - b + 8;
}

export function mul8(a, b) {
  return a * b + 8;
}

export function max28(a, b) {
  return a > b ? a : b + 8;
}

export function min28(a, b) {
  return a < b ? a : b + 8;
}

export function add9(a, b) {
  return a + b + 9;
}

export function sub9(a, b) {
  return a - b + 9;
}

export function mul9(a, b) {
  return a * b + 9;
}

export function max29(a, b) {
  return a > b ? a : b + 9;
}

export function min29(a, b) {
  return a < b ? a : b + 9;
}

export function add10(a, b) {
  return a + b + 10;
}

export function sub10(a, b) {
  return a - b + 10;
}

export function mul10(a, b) {
  return a * b + 10;
}

export function max210(a, b) {
  return a > b ? a : b + 10;
}

export function min210(a, b) {
  return a < b ? a : b + 10;
}

export function add11(a, b) {
  return a + b + 11;
}

export function sub11(a, b) {
  return a - b + 11;
}

export function mul11(a, b) {
  return a * b + 11;
}

export function max211(a, b) {
  return a > b ? a : b + 11;
}

export function min211(a, b) {
  return a < b ? a : b + 11;
}

export function add12(a, b) {
  return a + b + 12;
}

export function sub12(a, b) {
  return a - b + 12;
}

export function mul12(a, b) {
  return a * b + 12;
}

export function max212(a, b) {
  return a > b ? a : b + 12;
}

export function min212(a, b) {
  return a < b ? a : b + 12;
}

export function add13(a, b) {
  return a + b + 13;
}

export function sub13(a, b) {
  return a - b + 13;
}

export function mul13(a, b) {
  return a * b + 13;
}

export function max213(a, b) {
  return a > b ? a : b + 13;
}

export function min213(a, b) {
  return a < b ? a : b + 13;
}

export function add14(a, b) {
  return a + b + 14;
}

export function sub14(a, b) {
  return a - b + 14;
}

export function mul14(a, b) {
  return a * b + 14;
}

export function max214(a, b) {
  return a > b ? a : b + 14;
}

export function min214(a, b) {
  return a < b ? a : b + 14;
}
