//! Small fixed-size complex linear algebra: 3-vectors and 3x3 matrices.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Scalar>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn cr<T: Scalar>(re: f64) -> C<T> {
    Complex::new(T::lit(re), T::zero())
}

/// Unit complex number e^{iθ}.
#[inline]
pub fn cis<T: Scalar>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3<T>(pub [C<T>; 3]);

impl<T: Scalar> Vec3<T> {
    pub fn new(a: C<T>, b: C<T>, c: C<T>) -> Self {
        Vec3([a, b, c])
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Vec3([cr(a), cr(b), cr(c)])
    }

    pub fn from_reals(a: T, b: T, c: T) -> Self {
        Vec3([C::new(a, T::zero()), C::new(b, T::zero()), C::new(c, T::zero())])
    }

    pub fn zero() -> Self {
        Vec3([C::zero(); 3])
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = C::one();
        v
    }

    pub fn conj(&self) -> Self {
        Vec3([self.0[0].conj(), self.0[1].conj(), self.0[2].conj()])
    }

    pub fn cross(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Euclidean norm.
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> T {
        self.0.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |s, z| s.max(z.norm()))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn scale_re(&self, s: T) -> Self {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    /// Plain bilinear-free Euclidean Hermitian product sum a_k conj(b_k).
    pub fn edot(&self, o: &Self) -> C<T> {
        self.0[0] * o.0[0].conj() + self.0[1] * o.0[1].conj() + self.0[2] * o.0[2].conj()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn cast<U: Scalar>(&self) -> Vec3<U> {
        let f = |z: C<T>| C::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy()));
        Vec3([f(self.0[0]), f(self.0[1]), f(self.0[2])])
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = C<T>;
    fn index(&self, i: usize) -> &C<T> {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut C<T> {
        &mut self.0[i]
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<T: Scalar> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl<T: Scalar> Mul<C<T>> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: C<T>) -> Self {
        self.scale(s)
    }
}

impl<T: Scalar> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale_re(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<T>(pub [[C<T>; 3]; 3]);

impl<T: Scalar> Mat3<T> {
    pub fn zero() -> Self {
        Mat3([[C::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag(C::one(), C::one(), C::one())
    }

    pub fn diag(a: C<T>, b: C<T>, c: C<T>) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    /// Outer product a b^H.
    pub fn outer(a: &Vec3<T>, b: &Vec3<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = a.0[i] * b.0[j].conj();
            }
        }
        m
    }

    pub fn from_rows(rows: [[C<T>; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn from_cols(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][0] = a.0[i];
            m.0[i][1] = b.0[i];
            m.0[i][2] = c.0[i];
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3(self.0[i])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        let mut out = Vec3::zero();
        for i in 0..3 {
            out.0[i] = self.0[i][0] * v.0[0] + self.0[i][1] * v.0[1] + self.0[i][2] * v.0[2];
        }
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * s;
            }
        }
        m
    }

    pub fn trace(&self) -> C<T> {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> C<T> {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Cofactor matrix entry (i, j).
    pub fn cofactor(&self, i: usize, j: usize) -> C<T> {
        let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let s: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let m = &self.0;
        let minor = m[r[0]][s[0]] * m[r[1]][s[1]] - m[r[0]][s[1]] * m[r[1]][s[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() || !d.norm().is_finite() {
            return None;
        }
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[j][i] = self.cofactor(i, j) / d;
            }
        }
        Some(m)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |s, z| s.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn cast<U: Scalar>(&self) -> Mat3<U> {
        let f = |z: C<T>| C::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy()));
        let mut m = Mat3::<U>::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = f(self.0[i][j]);
            }
        }
        m
    }
}

impl<T: Scalar> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j];
            }
        }
        m
    }
}

impl<T: Scalar> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = m.0[i][j] + o.0[i][j];
            }
        }
        m
    }
}

impl<T: Scalar> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = m.0[i][j] - o.0[i][j];
            }
        }
        m
    }
}

/// Principal cube root.
pub fn cbrt<T: Scalar>(z: C<T>) -> C<T> {
    if z.norm() == T::zero() {
        return z;
    }
    let (r, th) = z.to_polar();
    C::from_polar(r.cbrt(), th / T::lit(3.0))
}

/// The three cube roots of unity.
pub fn cube_roots_of_unity<T: Scalar>() -> [C<T>; 3] {
    let t = T::TAU() / T::lit(3.0);
    [C::one(), cis(t), cis(-t)]
}

/// Roots of the monic cubic z^3 + a z^2 + b z + c by Durand-Kerner, polished with Newton.
pub fn cubic_roots<T: Scalar>(a: C<T>, b: C<T>, cc: C<T>) -> [C<T>; 3] {
    let p = |z: C<T>| ((z + a) * z + b) * z + cc;
    let dp = |z: C<T>| (z * T::lit(3.0) + a * T::lit(2.0)) * z + b;
    let scale = T::one() + a.norm().max(b.norm()).max(cc.norm());
    let seed = C::new(T::lit(0.4), T::lit(0.9));
    let mut r = [C::<T>::one(); 3];
    let mut s = C::<T>::one();
    for k in r.iter_mut() {
        *k = s * scale;
        s = s * seed;
    }
    for _ in 0..500 {
        let mut delta = T::zero();
        for i in 0..3 {
            let mut den = C::<T>::one();
            for j in 0..3 {
                if i != j {
                    den = den * (r[i] - r[j]);
                }
            }
            if den.norm() == T::zero() {
                den = C::new(T::epsilon(), T::zero());
            }
            let step = p(r[i]) / den;
            r[i] = r[i] - step;
            delta = delta.max(step.norm());
        }
        if delta <= T::epsilon() * scale {
            break;
        }
    }
    for z in r.iter_mut() {
        for _ in 0..3 {
            let d = dp(*z);
            if d.norm() <= T::epsilon() {
                break;
            }
            let nz = *z - p(*z) / d;
            if p(nz).norm() < p(*z).norm() {
                *z = nz;
            } else {
                break;
            }
        }
    }
    r
}
